import numpy as np
import pytest

from cqms.amplification import MatrixElement, bound_constant
from cqms.circle import CircleState, TrigPoly, TrivialBase, circle_distance
from cqms.exceptions import InvalidInputError
from cqms.extension import (
    DualPair,
    ExtensionElement,
    extension_diameter_bound,
    extension_distance,
    l1_seminorm,
    phi,
    psi,
)
from cqms.metric import Caps
from cqms.models import PodlesModel, PodlesParams, SuqModel, SuqParams, ToeplitzModel

TRIVIAL = TrivialBase()
SMALL = Caps(N=3, D=4, grid=256, ideal_degree=2, ideal_grid=128)


@pytest.fixture(scope="module")
def toeplitz():
    return ToeplitzModel(M=12, k=3, grid=256)


def test_l1_examples(toeplitz):
    assert l1_seminorm(toeplitz, toeplitz.unit()) == 0.0
    cos = ExtensionElement(MatrixElement.zeros(TRIVIAL), TrigPoly.cos(1))
    assert l1_seminorm(toeplitz, cos) == pytest.approx(1.0, abs=1e-6)
    ideal = ExtensionElement(MatrixElement(TRIVIAL, {(1, 1): 0.5}), TrigPoly.constant(0.0))
    assert l1_seminorm(toeplitz, ideal) == pytest.approx(4.0)


def test_l1_kernel(toeplitz, rng):
    for t in (-2.0, 0.0, 3.5):
        a = ExtensionElement(MatrixElement.zeros(TRIVIAL), TrigPoly.constant(t))
        assert toeplitz.l1_seminorm(a) == 0.0
    for _ in range(10):
        a = toeplitz.random_element(rng, SMALL)
        nonscalar = not a.G.is_zero() or a.f.trimmed().degree > 0
        assert (toeplitz.l1_seminorm(a) > 0) == nonscalar


def test_l1_seminorm_axioms(toeplitz, rng):
    for _ in range(20):
        a, b = toeplitz.random_element(rng, SMALL), toeplitz.random_element(rng, SMALL)
        t = float(rng.normal())
        assert toeplitz.l1_seminorm(a + b) <= toeplitz.l1_seminorm(a) + toeplitz.l1_seminorm(b) + 1e-9
        assert toeplitz.l1_seminorm(a * t) == pytest.approx(abs(t) * toeplitz.l1_seminorm(a), rel=1e-9)


def test_psi_examples(toeplitz):
    caps = SMALL
    f = TrigPoly.cos(2, 0.7)
    mu2 = CircleState.point(0.4)
    pair = toeplitz.pullback(mu2, caps)
    assert psi(toeplitz, pair)(ExtensionElement(MatrixElement.zeros(TRIVIAL), f)) == pytest.approx(mu2(f))
    assert psi(toeplitz, pair)(toeplitz.unit()) == pytest.approx(1.0)

    e1 = np.zeros(toeplitz.dim)
    e1[0] = 1.0
    vec = toeplitz.vector_state(e1, caps)
    a = ExtensionElement(MatrixElement(TRIVIAL, {(1, 1): 0.8}), TrigPoly.constant(0.0))
    assert psi(toeplitz, vec)(a) == pytest.approx(0.8)
    assert psi(toeplitz, vec)(toeplitz.unit()) == pytest.approx(1.0)


def test_phi_of_pullback(toeplitz):
    pair = toeplitz.pullback(CircleState.point(0.0), SMALL)
    back = phi(toeplitz, psi(toeplitz, pair), SMALL)
    np.testing.assert_allclose(back.ideal, 0.0, atol=1e-10)
    np.testing.assert_allclose(back.quotient, CircleState.point(0.0).covector(SMALL.D), atol=1e-10)


def test_phi_psi_round_trips(toeplitz, rng):
    caps = SMALL
    dim_i = toeplitz.ideal.ideal_dim(caps)
    dim_q = toeplitz.quotient.param_dim(caps)
    pair = DualPair(rng.normal(size=dim_i), rng.normal(size=dim_q), caps)
    again = phi(toeplitz, psi(toeplitz, pair), caps)
    np.testing.assert_allclose(again.covector(), pair.covector(), atol=1e-10)

    mu = toeplitz.vector_functional(toeplitz.random_vector(rng))
    rebuilt = psi(toeplitz, phi(toeplitz, mu, caps))
    for _ in range(100):
        a = toeplitz.random_element(rng, caps)
        assert rebuilt(a) == pytest.approx(mu(a), abs=1e-10)


def test_distance_identical_states(toeplitz):
    s = toeplitz.pullback(CircleState.point(1.0), SMALL)
    assert extension_distance(toeplitz, s, s, SMALL) == pytest.approx(0.0, abs=1e-7)


def test_pullback_isometry(toeplitz):
    a, b = CircleState.point(0.0), CircleState.point(np.pi / 2)
    ext = extension_distance(toeplitz, toeplitz.pullback(a, SMALL), toeplitz.pullback(b, SMALL), SMALL)
    assert ext == pytest.approx(circle_distance(a, b, SMALL.D, SMALL.grid), abs=1e-6)


def test_distance_caps_validation(toeplitz):
    caps = Caps(N=0, D=0, grid=64)
    with pytest.raises(InvalidInputError):
        extension_distance(toeplitz, CircleState.point(0.0), CircleState.point(1.0), caps)


def test_distance_rejects_mismatched_caps(toeplitz):
    pair = toeplitz.pullback(CircleState.point(0.0), SMALL)
    other = Caps(N=2, D=4, grid=256)
    with pytest.raises(InvalidInputError):
        toeplitz.covector(pair, other)


def test_vector_state_distance_bounded(toeplitz, rng):
    s = toeplitz.vector_state(toeplitz.random_vector(rng), SMALL)
    t = toeplitz.vector_state(toeplitz.random_vector(rng), SMALL)
    assert 0.0 < toeplitz.distance(s, t, SMALL) <= toeplitz.diameter_bound + 1e-6


def test_distance_monotone_in_caps(toeplitz, rng):
    v, w = toeplitz.random_vector(rng), toeplitz.random_vector(rng)
    values = []
    for caps in (Caps(N=1, D=2, grid=256), Caps(N=2, D=2, grid=256), Caps(N=2, D=4, grid=256)):
        s, t = toeplitz.vector_state(v, caps), toeplitz.vector_state(w, caps)
        values.append(toeplitz.distance(s, t, caps))
    assert values[0] <= values[1] + 1e-6 <= values[2] + 2e-6


def test_diameter_bounds():
    z2 = np.pi ** 2 / 6
    assert extension_diameter_bound(ToeplitzModel(8)) == pytest.approx(np.pi + 4 * z2)
    assert ToeplitzModel(8).diameter_bound == pytest.approx(9.7213, abs=1e-4)
    suq = SuqModel(SuqParams(M=4, W=2, D=4), grid=256)
    assert suq.diameter_bound == pytest.approx(np.pi + 4 * bound_constant(np.pi))
    assert suq.diameter_bound == pytest.approx(30.3922, abs=1e-4)
    pod = PodlesModel(PodlesParams(M=8), grid=256)
    assert pod.diameter_bound == pytest.approx(np.pi + 8 * z2)
    assert pod.diameter_bound == pytest.approx(16.301, abs=1e-3)


def test_nested_kernel_and_seminorm():
    pod = PodlesModel(PodlesParams(M=8), grid=256)
    inner = pod.quotient
    assert pod.l1_seminorm(pod.unit()) == 0.0
    x = ExtensionElement(MatrixElement(TRIVIAL, {(1, 2): 0.1}), TrigPoly.cos(1))
    a = ExtensionElement(MatrixElement(TRIVIAL, {(2, 2): 0.25}), x)
    expected = inner.l1_seminorm(x) + pod.ideal.lk_seminorm(a.G)
    assert pod.l1_seminorm(a) == pytest.approx(expected)
    assert pod.l1_seminorm(a) == pytest.approx(1.0 + 27 * 0.1 + 64 * 0.25, rel=1e-6)


def test_nested_pullback_isometry():
    pod = PodlesModel(PodlesParams(M=8), grid=256)
    caps = Caps(N=2, D=4, grid=256)
    a, b = CircleState.point(0.0), CircleState.point(np.pi)
    inner = pod.quotient
    d_inner = inner.distance(inner.pullback(a, caps), inner.pullback(b, caps), caps)
    pa = pod.pullback(inner.pullback(a, caps), caps)
    pb = pod.pullback(inner.pullback(b, caps), caps)
    assert pod.distance(pa, pb, caps) == pytest.approx(d_inner, abs=1e-6)
    assert d_inner == pytest.approx(circle_distance(a, b, caps.D, caps.grid), abs=1e-6)


def test_json_round_trip(toeplitz, rng):
    a = toeplitz.random_element(rng, SMALL)
    back = toeplitz.element_from_json(toeplitz.element_to_json(a))
    np.testing.assert_allclose(toeplitz.realize(back), toeplitz.realize(a), atol=1e-15)
    with pytest.raises(InvalidInputError):
        toeplitz.element_from_json({"kind": "suq2", "ideal": {}, "quotient": []})
