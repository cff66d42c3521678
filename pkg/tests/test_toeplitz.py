import numpy as np
import pytest

from cqms.amplification import MatrixElement
from cqms.circle import TrigPoly, TrivialBase, sup_norm
from cqms.exceptions import InvalidInputError, PreconditionError
from cqms.models.toeplitz import (
    ToeplitzModel,
    embed_scalar_matrix,
    random_nonnegative_symbol,
    splitting_positivity_check,
    toeplitz_element,
    toeplitz_matrix,
)
from cqms.numerics import min_eigenvalue_hermitian

TRIVIAL = TrivialBase()


def compression_oracle(f, M, samples=512):
    # <e_m, f e_n> = (1/2pi) int f(theta) e^{i(n-m)theta}, by quadrature
    theta = 2 * np.pi * np.arange(samples) / samples
    vals = f(theta)
    m = np.arange(M)
    phase = np.exp(1j * np.subtract.outer(m, m)[..., None] * -theta)
    return (phase * vals).mean(axis=-1)


def test_identity_symbol():
    np.testing.assert_array_equal(toeplitz_matrix(TrigPoly.constant(1.0), 4), np.eye(4))


def test_two_cos_symbol():
    T = toeplitz_matrix(TrigPoly.cos(1, 2.0), 3)
    np.testing.assert_allclose(T, [[0, 1, 0], [1, 0, 1], [0, 1, 0]], atol=1e-15)


def test_entries_match_quadrature_oracle(rng):
    f = TrigPoly.from_cos_sin(0.3, rng.normal(size=4), rng.normal(size=4))
    np.testing.assert_allclose(toeplitz_matrix(f, 9), compression_oracle(f, 9), atol=1e-12)


def test_sine_symbol_is_hermitian_and_complex():
    T = toeplitz_matrix(TrigPoly.sin(1), 5)
    assert np.iscomplexobj(T)
    np.testing.assert_allclose(T, T.conj().T, atol=0)


def test_rejects_empty_size():
    with pytest.raises(InvalidInputError):
        toeplitz_matrix(TrigPoly.cos(1), 0)


def test_positivity_examples():
    assert splitting_positivity_check(TrigPoly.constant(1.0), 6) == pytest.approx(1.0)
    one_plus_cos = TrigPoly.cos(1) + 1.0
    assert min_eigenvalue_hermitian(toeplitz_matrix(one_plus_cos, 8)) >= -1e-10
    assert splitting_positivity_check(one_plus_cos * one_plus_cos, 16) >= -1e-10
    f = TrigPoly.cos(1) + TrigPoly.cos(2) + 2.0
    assert f(np.linspace(0, 2 * np.pi, 4096)).min() >= 0
    assert splitting_positivity_check(f, 16) >= -1e-10


def test_positivity_precondition():
    with pytest.raises(PreconditionError):
        splitting_positivity_check(TrigPoly.cos(1), 4)


def test_positivity_random_symbols(rng):
    for _ in range(200):
        f = random_nonnegative_symbol(rng, int(rng.integers(0, 13)))
        assert splitting_positivity_check(f, int(rng.integers(1, 33))) >= -1e-10


def test_constant_along_diagonals(rng):
    f = TrigPoly.from_cos_sin(1.0, rng.normal(size=3), rng.normal(size=3))
    small, large = toeplitz_matrix(f, 10), toeplitz_matrix(f, 20)
    np.testing.assert_array_equal(large[10:, 10:], small)
    np.testing.assert_array_equal(large[:10, :10], small)


def test_realized_norm_approaches_sup(rng):
    model = ToeplitzModel(64)
    for _ in range(5):
        f = TrigPoly.from_cos_sin(rng.normal(), rng.normal(size=3), rng.normal(size=3))
        sup = sup_norm(f)
        r = model.norm(toeplitz_element(f))
        assert r <= sup + 1e-6
        assert r >= sup - 0.05 * sup


def test_element_examples():
    model = ToeplitzModel(6)
    one = toeplitz_element(TrigPoly.constant(1.0))
    assert model.l1_seminorm(one) == 0.0
    np.testing.assert_array_equal(model.realize(one), np.eye(6))
    assert model.l1_seminorm(toeplitz_element(TrigPoly.cos(1))) == pytest.approx(1.0, abs=1e-6)
    G = MatrixElement(TRIVIAL, {(1, 1): 0.5})
    assert model.l1_seminorm(toeplitz_element(TrigPoly.constant(0.0), G)) == pytest.approx(4.0)


def test_embedding_uses_zero_based_positions():
    G = MatrixElement(TRIVIAL, {(1, 2): 3.0, (4, 4): -1.0})
    A = embed_scalar_matrix(G, 4)
    assert A[0, 1] == A[1, 0] == 3.0
    assert A[3, 3] == -1.0
    assert np.count_nonzero(A) == 3
    model = ToeplitzModel(4)
    a = toeplitz_element(TrigPoly.cos(1), G)
    np.testing.assert_allclose(model.realize(a), toeplitz_matrix(TrigPoly.cos(1), 4) + A)
