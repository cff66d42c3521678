import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cqms.circle import (
    CircleBase,
    CircleState,
    HaarState,
    TrigPoly,
    TrivialBase,
    base_diameter,
    circle_distance,
    evaluate,
    geodesic_distance,
    haar_state,
    lip_seminorm,
    pair_state,
    sup_norm,
)
from cqms.exceptions import InvalidInputError

coefs = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


@st.composite
def trig_polys(draw, max_degree=6):
    D = draw(st.integers(0, max_degree))
    a0 = draw(coefs)
    a = draw(st.lists(coefs, min_size=D, max_size=D))
    b = draw(st.lists(coefs, min_size=D, max_size=D))
    return TrigPoly.from_cos_sin(a0, a, b)


def dense_derivative_oracle(f, samples=200_000):
    # finite differences on a much finer grid than the implementation uses
    theta = np.linspace(0, 2 * np.pi, samples, endpoint=False)
    h = 1e-6
    return float(np.abs((f(theta + h) - f(theta - h)) / (2 * h)).max())


# -- TrigPoly ---------------------------------------------------------------------------


def test_cosine_coefficients():
    f = TrigPoly.cos(1)
    assert f.c(1) == pytest.approx(0.5)
    assert f.c(-1) == pytest.approx(0.5)
    assert f.c(0) == 0


def test_rejects_non_hermitian_coefficients():
    with pytest.raises(InvalidInputError):
        TrigPoly([1.0, 0.0, 0.0 + 0.5j])
    with pytest.raises(InvalidInputError):
        TrigPoly([1.0, 2.0])


def test_pairs_round_trip():
    f = TrigPoly.from_cos_sin(1.5, [0.25, -1.0], [0.5, 0.0])
    payload = json.loads(json.dumps(f.to_pairs()))
    assert all(len(p) == 3 for p in payload)
    assert TrigPoly.from_pairs(payload) == f


def test_params_round_trip():
    f = TrigPoly.from_cos_sin(0.5, [1.0, 2.0, 0.0], [0.0, -1.0, 0.25])
    assert TrigPoly.from_params(f.params(8)) == f
    with pytest.raises(InvalidInputError):
        f.params(2)


@given(trig_polys(), st.floats(0, 2 * np.pi))
def test_evaluation_is_real(f, theta):
    n = np.arange(-f.degree, f.degree + 1)
    full = np.exp(1j * n * theta) @ f.coef
    assert abs(full.imag) <= 1e-10
    assert evaluate(f, theta) == pytest.approx(full.real, abs=1e-12)


# -- eval / lip / haar / pair examples ----------------------------------------------


def test_eval_examples():
    assert evaluate(TrigPoly.constant(3.0), 1.2) == 3.0
    assert evaluate(TrigPoly.cos(1), 0.0) == pytest.approx(1.0)
    assert evaluate(TrigPoly.cos(1), np.pi / 3) == pytest.approx(np.cos(np.pi / 3), abs=1e-14)


def test_lip_examples():
    assert lip_seminorm(TrigPoly.constant(7.0)) == 0.0
    assert lip_seminorm(TrigPoly.cos(1)) == pytest.approx(1.0, abs=1e-6)
    assert lip_seminorm(TrigPoly.cos(1, 2.0) + 3.0) == pytest.approx(2.0, abs=1e-6)


def test_lip_matches_finite_difference_oracle(rng):
    for _ in range(5):
        f = CircleBase().random_element(rng, degree=6)
        assert lip_seminorm(f) == pytest.approx(dense_derivative_oracle(f), rel=1e-4)


def test_lip_grid_requirement():
    with pytest.raises(InvalidInputError):
        lip_seminorm(TrigPoly.cos(10), grid=256)


def test_haar_examples():
    assert haar_state(TrigPoly.constant(5.0)) == 5.0
    assert haar_state(TrigPoly.cos(1)) == 0.0
    assert haar_state(TrigPoly.cos(1, 3.0) + 2.0) == 2.0
    assert HaarState()(TrigPoly.cos(1, 3.0) + 2.0) == 2.0


def test_pair_examples():
    cos = TrigPoly.cos(1)
    assert pair_state(CircleState.point(0.0), cos) == pytest.approx(1.0)
    assert pair_state(CircleState([(0.0, 0.5), (np.pi, 0.5)]), cos) == pytest.approx(0.0, abs=1e-15)
    mixed = CircleState([(0.0, 0.25), (np.pi / 2, 0.75)])
    assert pair_state(mixed, cos) == pytest.approx(0.25 + 0.75 * np.cos(np.pi / 2))


def test_state_pairs_unit_with_one(rng):
    for _ in range(10):
        mu = CircleBase().random_state(rng, atoms=4)
        assert mu(TrigPoly.constant(1.0)) == pytest.approx(1.0, abs=1e-12)


def test_state_validation():
    with pytest.raises(InvalidInputError):
        CircleState([(0.0, 0.5)])
    with pytest.raises(InvalidInputError):
        CircleState([(0.0, 1.5), (1.0, -0.5)])
    with pytest.raises(InvalidInputError):
        CircleState([])


def test_state_covector_matches_pairing(rng):
    mu = CircleBase().random_state(rng, atoms=3)
    f = CircleBase().random_element(rng, degree=5)
    assert mu.covector(8) @ f.params(8) == pytest.approx(mu(f), abs=1e-12)


# -- seminorm axioms ----------------------------------------------------------------


@given(trig_polys(), trig_polys())
def test_lip_subadditive(f, g):
    assert lip_seminorm(f + g) <= lip_seminorm(f) + lip_seminorm(g) + 1e-9


@given(trig_polys(), st.floats(-5, 5, allow_nan=False))
def test_lip_homogeneous(f, t):
    assert lip_seminorm(f * t) == pytest.approx(abs(t) * lip_seminorm(f), rel=1e-9, abs=1e-12)


@given(trig_polys())
def test_lip_ignores_constants(f):
    assert lip_seminorm(f + 4.0) == pytest.approx(lip_seminorm(f), rel=1e-12, abs=1e-12)


def test_lemma1_on_random_polys(rng):
    base = CircleBase()
    for _ in range(200):
        f = base.random_element(rng, degree=int(rng.integers(0, 17)))
        bound = (lip_seminorm(f) + abs(haar_state(f))) * (1 + np.pi)
        assert sup_norm(f) <= bound + 1e-6


# -- distances -------------------------------------------------------------------------


def test_distance_to_self_is_zero():
    mu = CircleState([(0.3, 0.4), (2.0, 0.6)])
    assert circle_distance(mu, mu, 8) == pytest.approx(0.0, abs=1e-9)


def test_distance_quarter_turn():
    d = circle_distance(CircleState.point(0.0), CircleState.point(np.pi / 2), 32)
    assert d == pytest.approx(np.pi / 2, rel=0.05)


def test_distance_half_mass_moved():
    mixed = CircleState([(0.0, 0.5), (np.pi, 0.5)])
    d = circle_distance(mixed, CircleState.point(0.0), 32)
    assert d == pytest.approx(np.pi / 2, rel=0.05)


def test_distance_rejects_zero_degree():
    with pytest.raises(InvalidInputError):
        circle_distance(CircleState.point(0.0), CircleState.point(1.0), 0)


def test_distance_symmetric_and_triangle(rng):
    base = CircleBase()
    for _ in range(2):
        a, b, c = (base.random_state(rng, atoms=2) for _ in range(3))
        ab = circle_distance(a, b, 8)
        ba = circle_distance(b, a, 8)
        bc = circle_distance(b, c, 8)
        ac = circle_distance(a, c, 8)
        assert ab == pytest.approx(ba, abs=1e-6)
        assert ac <= ab + bc + 1e-6


def test_distance_nondecreasing_in_degree():
    mu, lam = CircleState.point(0.4), CircleState([(2.5, 0.3), (4.0, 0.7)])
    values = [circle_distance(mu, lam, D) for D in (4, 8, 16)]
    assert all(x <= y + 1e-6 for x, y in zip(values, values[1:]))
    assert values[-1] <= np.pi + 1e-6


def test_geodesic_distance():
    assert geodesic_distance(0.1, 2 * np.pi - 0.1) == pytest.approx(0.2)
    assert geodesic_distance(0.0, np.pi) == pytest.approx(np.pi)


def test_base_diameter():
    assert base_diameter(CircleBase()) == pytest.approx(np.pi)
    assert base_diameter(TrivialBase()) == 0.0


def test_trivial_base():
    base = TrivialBase()
    assert base.seminorm(3.0) == 0.0
    assert base.norm(-2.5) == 2.5
    assert base.nu(4.0) == 4.0


def test_point_evaluation_designated_state():
    base = CircleBase(nu=CircleState.point(0.0))
    assert base.nu(TrigPoly.cos(1)) == pytest.approx(1.0)
