"""CQMS structure on a split extension ``0 -> K (x) A -> A_1 -> A_2 -> 0``.

Elements are kept in split form ``a = i(G) + sigma(f)``: the quotient image is
``pi(a) = f`` and the ideal part is ``a - sigma(pi(a)) = i(G)``, both exact.
The seminorm is

    L_1(a) = L_2(f) + L_k(G),

and dual functionals decompose as ``mu <-> (mu restricted to the ideal, mu o sigma)``
with inverse ``(mu_1, mu_2) -> (a -> mu_2(pi a) + mu_1(a - sigma pi a))``.

Subclasses supply the concrete realization: :meth:`realize_ideal`,
:meth:`realize_splitting` and ``dim``.  Because the quotient may itself be a
:class:`SplitExtension`, extensions nest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .amplification import Amplification, MatrixElement
from .exceptions import InvalidInputError
from .metric import BallLP, Caps, lp_distance
from .numerics import operator_norm


@dataclass(frozen=True)
class ExtensionElement:
    """Split form ``i(G) + sigma(f)``."""

    G: MatrixElement
    f: object

    def __add__(self, other):
        return ExtensionElement(self.G + other.G, self.f + other.f)

    def __sub__(self, other):
        return ExtensionElement(self.G - other.G, self.f - other.f)

    def __mul__(self, t):
        return ExtensionElement(float(t) * self.G, float(t) * self.f)

    __rmul__ = __mul__


@dataclass(frozen=True)
class DualPair:
    """Finite description ``(mu_1, mu_2)`` of a functional on a split extension.

    ``ideal`` is a covector on the ideal parameters, ``quotient`` a covector on
    the quotient parameters, both at ``caps``.
    """

    ideal: np.ndarray
    quotient: np.ndarray
    caps: Caps

    def covector(self) -> np.ndarray:
        return np.concatenate([self.ideal, self.quotient])


class LinearFunctional:
    """Functional on an instance given by a covector on its capped parameters."""

    def __init__(self, instance, covector, caps: Caps):
        self.instance = instance
        self.w = np.asarray(covector, dtype=float)
        self.caps = caps

    def __call__(self, a) -> float:
        return float(self.w @ self.instance.to_params(a, self.caps))


class SplitExtension:
    """Split extension with ideal ``K (x) base`` and a positive unital splitting.

    Parameters
    ----------
    ideal : Amplification
        The ideal part with its ``L_k`` seminorm.
    quotient : CircleBase or SplitExtension
        The quotient CQMS.
    """

    name = "extension"
    #: norm of a positive unital map on selfadjoint elements
    splitting_norm = 1.0

    def __init__(self, ideal: Amplification, quotient):
        self.ideal = ideal
        self.quotient = quotient

    # -- realization (subclass hooks) ----------------------------------------------
    dim: int

    def realize_ideal(self, G: MatrixElement) -> np.ndarray:
        raise NotImplementedError

    def realize_splitting(self, f) -> np.ndarray:
        raise NotImplementedError

    def realize(self, a: ExtensionElement) -> np.ndarray:
        return self.realize_ideal(a.G) + self.realize_splitting(a.f)

    def quadratic_form(self, a: ExtensionElement, v: np.ndarray) -> float:
        """``<v, realize(a) v>``; subclasses may avoid forming the matrix."""
        return float(np.real(v.conj() @ (self.realize(a) @ v)))

    # -- algebra -----------------------------------------------------------------------
    def unit(self) -> ExtensionElement:
        return ExtensionElement(MatrixElement.zeros(self.ideal.base), self.quotient.unit())

    def zero(self) -> ExtensionElement:
        return ExtensionElement(MatrixElement.zeros(self.ideal.base), 0.0 * self.quotient.unit())

    def quotient_map(self, a: ExtensionElement):
        return a.f

    def ideal_part(self, a: ExtensionElement) -> MatrixElement:
        return a.G

    def l1_seminorm(self, a: ExtensionElement) -> float:
        return float(self.quotient.seminorm(a.f) + self.ideal.lk_seminorm(a.G))

    seminorm = l1_seminorm

    def norm(self, a: ExtensionElement) -> float:
        M = self.realize(a)
        return operator_norm(M) if np.any(M) else 0.0

    @property
    def diameter_bound(self) -> float:
        return extension_diameter_bound(self)

    # -- parameterisation -----------------------------------------------------------------
    def param_dim(self, caps: Caps) -> int:
        return self.ideal.ideal_dim(caps) + self.quotient.param_dim(caps)

    def to_params(self, a: ExtensionElement, caps: Caps) -> np.ndarray:
        return np.concatenate([self.ideal.ideal_params(a.G, caps), self.quotient.to_params(a.f, caps)])

    def from_params(self, p, caps: Caps) -> ExtensionElement:
        p = np.asarray(p, dtype=float)
        n = self.ideal.ideal_dim(caps)
        return ExtensionElement(self.ideal.ideal_from_params(p[:n], caps), self.quotient.from_params(p[n:], caps))

    def unit_index(self, caps: Caps) -> int:
        return self.ideal.ideal_dim(caps) + self.quotient.unit_index(caps)

    def lp_ball(self, lp: BallLP, caps: Caps):
        p_ideal, b_ideal, c_ideal = self.ideal.lp_ideal(lp, caps)
        p_quot, b_quot, c_quot = self.quotient.lp_ball(lp, caps)
        return (
            np.concatenate([p_ideal, p_quot]),
            np.concatenate([b_ideal, b_quot]),
            np.concatenate([c_ideal, c_quot]),
        )

    # -- functionals ---------------------------------------------------------------------------
    def pullback(self, state, caps: Caps) -> DualPair:
        """``(0, mu_2)``: a quotient state composed with the quotient map."""
        return DualPair(np.zeros(self.ideal.ideal_dim(caps)), self.quotient.covector(state, caps), caps)

    def covector(self, state, caps: Caps) -> np.ndarray:
        if isinstance(state, DualPair):
            if state.caps != caps:
                raise InvalidInputError("dual pair was built at different caps")
            return state.covector()
        if isinstance(state, np.ndarray):
            if state.shape != (self.param_dim(caps),):
                raise InvalidInputError("covector has the wrong length for these caps")
            return state
        return self.pullback(state, caps).covector()

    def psi(self, pair: DualPair) -> LinearFunctional:
        """``(mu_1, mu_2) -> (a -> mu_2(pi(a)) + mu_1(a - sigma(pi(a))))``."""
        return LinearFunctional(self, pair.covector(), pair.caps)

    def phi(self, mu, caps: Caps) -> DualPair:
        """``mu -> (mu restricted to the ideal, mu o sigma)``, read off generators.

        ``mu`` is any callable on split-form elements; it is probed on the
        ideal matrix units and on the quotient basis at ``caps``.
        """
        dim = self.param_dim(caps)
        basis = np.eye(dim)
        w = np.array([mu(self.from_params(basis[k], caps)) for k in range(dim)])
        n = self.ideal.ideal_dim(caps)
        return DualPair(w[:n], w[n:], caps)

    def vector_functional(self, v):
        """``a -> <v, realize(a) v>`` for a unit vector of the realization space."""
        v = np.asarray(v, dtype=complex).ravel()
        if v.size != self.dim:
            raise InvalidInputError(f"vector has length {v.size}, realization has dimension {self.dim}")
        v = v / np.linalg.norm(v)

        def mu(a):
            return self.quadratic_form(a, v)

        return mu

    def vector_state(self, v, caps: Caps) -> DualPair:
        return self.phi(self.vector_functional(v), caps)

    def distance(self, s, t, caps: Caps) -> float:
        return extension_distance(self, s, t, caps)

    # -- sampling ----------------------------------------------------------------------------
    def random_element(self, rng, caps: Caps, degree: int = 4) -> ExtensionElement:
        G = self.ideal.random_matrix_element(rng, caps.N, degree=min(degree, caps.ideal_degree))
        if isinstance(self.quotient, SplitExtension):
            f = self.quotient.random_element(rng, caps, degree)
        else:
            f = self.quotient.random_element(rng, degree=min(degree, caps.D))
        return ExtensionElement(G, f)

    def random_vector(self, rng) -> np.ndarray:
        v = rng.normal(size=self.dim) + 1j * rng.normal(size=self.dim)
        return v / np.linalg.norm(v)

    # -- serialisation ---------------------------------------------------------------------------
    def element_to_json(self, a: ExtensionElement):
        return {
            "kind": self.name,
            "ideal": self.ideal.element_to_json(a.G),
            "quotient": self.quotient.element_to_json(a.f),
        }

    def element_from_json(self, payload) -> ExtensionElement:
        if payload.get("kind") != self.name:
            raise InvalidInputError(f"expected kind {self.name!r}, got {payload.get('kind')!r}")
        G = self.ideal.element_from_json(payload["ideal"])
        return ExtensionElement(G, self.quotient.element_from_json(payload["quotient"]))


def l1_seminorm(x: SplitExtension, a: ExtensionElement) -> float:
    return x.l1_seminorm(a)


def psi(x: SplitExtension, pair: DualPair) -> LinearFunctional:
    return x.psi(pair)


def phi(x: SplitExtension, mu, caps: Caps) -> DualPair:
    return x.phi(mu, caps)


def extension_distance(x: SplitExtension, s, t, caps: Caps) -> float:
    """``sup { |s(a) - t(a)| : L_1(a) <= 1 }`` at the given caps."""
    if caps.N < 1 and caps.D < 1:
        raise InvalidInputError("caps must allow a nonempty ideal (N >= 1) or quotient (D >= 1)")
    return lp_distance(x, x.covector(s, caps), x.covector(t, caps), caps)


def extension_diameter_bound(x: SplitExtension) -> float:
    """``diam(A_2) + 2 (1 + ||sigma||) C`` with ``C`` the ideal's norm constant."""
    return float(x.quotient.diameter_bound + 2.0 * (1.0 + x.splitting_norm) * x.ideal.constant)

