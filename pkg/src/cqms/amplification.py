"""Symmetric matrices over a base CQMS with the weighted seminorms ``L_k``.

For a base ``(Lip(A), L, nu)`` of diameter ``d`` the ideal part consists of
finitely supported symmetric matrices ``G = ((a_ij))`` (1-based indices), and

    L_k(G) = max_{i,j} (i + j)^k (L(a_ij) + |nu(a_ij)|),    L_k(I) = 0.

Adding scalars gives the order unit space of :class:`AmplifiedElement`.  The
norm bound ``||G|| <= (1 + d) (pi^2 / 6) L_2(G)`` and its truncation
consequence are what make ``L_k`` a Lip norm for ``k > 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circle import CircleBase, TrivialBase, grid_angles
from .exceptions import InvalidInputError
from .metric import BallLP, Caps, lp_distance
from .numerics import hermitian_norms, operator_norm

DEFAULT_K = 3


def bound_constant(d: float) -> float:
    """``(1 + d) * zeta(2)`` with ``zeta(2) = pi^2 / 6``."""
    if d < 0:
        raise InvalidInputError(f"diameter must be nonnegative, got {d}")
    return (1.0 + d) * math.pi ** 2 / 6.0


def pair_indices(N: int):
    """Unordered index pairs ``(i, j)``, ``1 <= i <= j <= N``, row-major."""
    return [(i, j) for i in range(1, N + 1) for j in range(i, N + 1)]


class MatrixElement:
    """Finitely supported symmetric matrix with entries in a base algebra.

    Entries are stored once per unordered pair, so ``a_ij = a_ji`` holds by
    construction.  ``N`` is the support size (largest admissible index).
    """

    def __init__(self, base, entries=None, N: int | None = None):
        self.base = base
        store = {}
        for (i, j), x in (entries or {}).items():
            i, j = int(i), int(j)
            if i < 1 or j < 1:
                raise InvalidInputError(f"indices are 1-based, got ({i}, {j})")
            key = (min(i, j), max(i, j))
            if key in store and (i, j) != key:
                raise InvalidInputError(f"entry {key} given twice")
            store[key] = x
        largest = max((j for _, j in store), default=0)
        self.N = largest if N is None else int(N)
        if self.N < largest:
            raise InvalidInputError(f"support size {self.N} smaller than largest index {largest}")
        self._entries = dict(sorted(store.items()))

    @classmethod
    def zeros(cls, base, N: int = 0) -> "MatrixElement":
        return cls(base, {}, N)

    @classmethod
    def from_dense(cls, base, matrix) -> "MatrixElement":
        """From a real symmetric array (trivial base only)."""
        A = np.asarray(matrix, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or not np.allclose(A, A.T, atol=0, rtol=0):
            raise InvalidInputError("expected an exactly symmetric square array")
        n = A.shape[0]
        return cls(base, {(i, j): float(A[i - 1, j - 1]) for i, j in pair_indices(n) if A[i - 1, j - 1] != 0}, n)

    def entry(self, i: int, j: int):
        return self._entries.get((min(i, j), max(i, j)), self.base.zero())

    def items(self):
        return self._entries.items()

    def is_zero(self) -> bool:
        return all(_entry_is_zero(x) for x in self._entries.values())

    def dense(self) -> np.ndarray:
        """Scalar matrix (trivial base)."""
        A = np.zeros((self.N, self.N))
        for (i, j), x in self._entries.items():
            A[i - 1, j - 1] = A[j - 1, i - 1] = float(x)
        return A

    def sampled(self, thetas) -> np.ndarray:
        """Stack of real symmetric matrices ``((a_ij(theta)))`` for each angle."""
        thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
        out = np.zeros((thetas.size, self.N, self.N))
        for (i, j), x in self._entries.items():
            vals = self.base.sample(x, thetas)
            out[:, i - 1, j - 1] = vals
            out[:, j - 1, i - 1] = vals
        return out

    def _combine(self, other, op):
        if type(other.base) is not type(self.base):
            raise InvalidInputError("matrix elements over different bases")
        keys = set(self._entries) | set(other._entries)
        zero = self.base.zero()
        return MatrixElement(
            self.base,
            {k: op(self._entries.get(k, zero), other._entries.get(k, zero)) for k in keys},
            max(self.N, other.N),
        )

    def __add__(self, other):
        return self._combine(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._combine(other, lambda x, y: x - y)

    def __neg__(self):
        return MatrixElement(self.base, {k: -x for k, x in self._entries.items()}, self.N)

    def __mul__(self, t):
        return MatrixElement(self.base, {k: float(t) * x for k, x in self._entries.items()}, self.N)

    __rmul__ = __mul__

    def __repr__(self):
        return f"MatrixElement(base={self.base.name}, N={self.N}, entries={len(self._entries)})"


def _entry_is_zero(x) -> bool:
    return x == 0 if isinstance(x, float) else not np.any(x.coef)


def truncate(G: MatrixElement, N: int) -> MatrixElement:
    """``P_N(G)``: keep entries with ``i, j <= N``."""
    if N < 0:
        raise InvalidInputError(f"N must be nonnegative, got {N}")
    return MatrixElement(G.base, {k: x for k, x in G.items() if k[1] <= N}, min(N, G.N))


@dataclass(frozen=True)
class AmplifiedElement:
    """``i(G) + lam * I``."""

    G: MatrixElement
    lam: float = 0.0


class AmplifiedVectorState:
    """``a -> <v, (beta(a_ij)) v> + lam ||v||^2`` for a base state ``beta``.

    ``beta=None`` uses the base's designated state (the ``nu``-induced state);
    for the circle base a :class:`CircleState` point mass gives a vector state of
    the faithful realization.
    """

    def __init__(self, v, beta=None):
        v = np.asarray(v, dtype=complex).ravel()
        norm = np.linalg.norm(v)
        if norm == 0:
            raise InvalidInputError("vector must be nonzero")
        self.v = v / norm
        self.beta = beta

    def weights(self, N: int) -> np.ndarray:
        v = np.zeros(N, dtype=complex)
        m = min(N, self.v.size)
        v[:m] = self.v[:m]
        return np.real(np.outer(v.conj(), v))


class InfinityState:
    """The state ``i(G) + lam I -> lam`` that vanishes on the ideal."""


class Amplification:
    """Ideal algebra ``A_nu`` over ``base`` with seminorm ``L_k``.

    Parameters
    ----------
    base : CircleBase or TrivialBase
    k : int
        Weight exponent; ``L_k`` is a Lip norm for ``k > 2``.
    """

    def __init__(self, base, k: int = DEFAULT_K):
        if k < 0:
            raise InvalidInputError(f"k must be nonnegative, got {k}")
        self.base = base
        self.k = k
        self.name = f"amplification[{base.name}]"

    @property
    def constant(self) -> float:
        return bound_constant(self.base.diameter_bound)

    @property
    def diameter_bound(self) -> float:
        return 2.0 * self.constant

    # -- seminorm and norm ----------------------------------------------------
    def lk_seminorm(self, G, k: int | None = None) -> float:
        if isinstance(G, AmplifiedElement):
            G = G.G
        k = self.k if k is None else k
        if k < 0:
            raise InvalidInputError(f"k must be nonnegative, got {k}")
        best = 0.0
        for (i, j), x in G.items():
            term = (i + j) ** k * (self.base.seminorm(x) + abs(self.base.nu(x)))
            best = max(best, term)
        return float(best)

    seminorm = lk_seminorm

    def amplified_norm(self, a, grid: int | None = None) -> float:
        """Norm of ``i(G) + lam I`` in the faithful realization.

        Exact for the trivial base; for the circle base the sup over angles is
        sampled on ``grid`` points (default: the base grid).
        """
        if isinstance(a, MatrixElement):
            a = AmplifiedElement(a, 0.0)
        G, lam = a.G, a.lam
        if G.N == 0:
            return abs(lam)
        if isinstance(self.base, TrivialBase):
            return operator_norm(G.dense() + lam * np.eye(G.N))
        thetas = grid_angles(grid or self.base.grid)
        stack = G.sampled(thetas) + lam * np.eye(G.N)
        return float(hermitian_norms(stack).max())

    norm = amplified_norm

    def lemma1_check(self, f):
        """``(||f||, (L(f) + |nu(f)|)(1 + d))`` for a base element ``f``."""
        return lemma1_check(self.base, f)

    def unit(self) -> AmplifiedElement:
        return AmplifiedElement(MatrixElement.zeros(self.base), 1.0)

    # -- parameterisation -------------------------------------------------------
    def ideal_dim(self, caps: Caps) -> int:
        return len(pair_indices(caps.N)) * self.base.entry_dim(caps)

    def ideal_params(self, G: MatrixElement, caps: Caps) -> np.ndarray:
        if G.N > caps.N and any(j > caps.N for (_, j), _ in G.items()):
            raise InvalidInputError(f"element support exceeds cap N={caps.N}")
        return np.concatenate(
            [self.base.entry_params(G.entry(i, j), caps) for i, j in pair_indices(caps.N)]
            or [np.zeros(0)]
        )

    def ideal_from_params(self, p, caps: Caps) -> MatrixElement:
        p = np.asarray(p, dtype=float)
        dim = self.base.entry_dim(caps)
        entries = {}
        for n, (i, j) in enumerate(pair_indices(caps.N)):
            chunk = p[n * dim:(n + 1) * dim]
            if np.any(chunk):
                entries[(i, j)] = self.base.entry_from_params(chunk)
        return MatrixElement(self.base, entries, caps.N)

    def ideal_covector(self, state, caps: Caps) -> np.ndarray:
        """Covector of ``G -> <v, (beta(g_ij)) v>`` on ideal parameters."""
        if isinstance(state, InfinityState):
            return np.zeros(self.ideal_dim(caps))
        W = state.weights(caps.N)
        beta = self.base.entry_covector(state.beta, caps)
        parts = [(W[i - 1, j - 1] * (1 if i == j else 2)) * beta for i, j in pair_indices(caps.N)]
        return np.concatenate(parts or [np.zeros(0)])

    def lp_ideal(self, lp: BallLP, caps: Caps):
        """Ideal parameters plus a variable ``z >= L_k(G)``."""
        params = []
        z = lp.add_vars(1, lo=0.0)[0]
        for i, j in pair_indices(caps.N):
            p, bidx, bcoef = self.base.lp_entry(lp, caps)
            params.append(p)
            weight = float((i + j) ** self.k)
            lp.add_rows(np.concatenate([bidx, [z]]), np.concatenate([weight * bcoef, [-1.0]])[None, :], 0.0)
        params = np.concatenate(params) if params else np.zeros(0, dtype=int)
        return params, np.array([z]), np.ones(1)

    # CQMS protocol for AmplifiedElement: parameters [lam, ideal...]
    def param_dim(self, caps: Caps) -> int:
        return 1 + self.ideal_dim(caps)

    def to_params(self, a: AmplifiedElement, caps: Caps) -> np.ndarray:
        return np.concatenate([[a.lam], self.ideal_params(a.G, caps)])

    def from_params(self, p, caps: Caps) -> AmplifiedElement:
        return AmplifiedElement(self.ideal_from_params(p[1:], caps), float(p[0]))

    def unit_index(self, caps: Caps) -> int:
        return 0

    def covector(self, state, caps: Caps) -> np.ndarray:
        if isinstance(state, np.ndarray):
            return state
        return np.concatenate([[1.0], self.ideal_covector(state, caps)])

    def lp_ball(self, lp: BallLP, caps: Caps):
        lam = lp.add_vars(1)
        lp.fix(lam)
        params, bidx, bcoef = self.lp_ideal(lp, caps)
        return np.concatenate([lam, params]), bidx, bcoef

    def distance(self, s, t, caps: Caps) -> float:
        return lp_distance(self, self.covector(s, caps), self.covector(t, caps), caps)

    def evaluate_state(self, state, a: AmplifiedElement) -> float:
        """Direct pairing (no parameterisation), used to cross-check covectors."""
        if isinstance(state, InfinityState):
            return float(a.lam)
        W = state.weights(a.G.N)
        total = a.lam
        beta = self.base.nu if state.beta is None else state.beta
        for (i, j), x in a.G.items():
            total += W[i - 1, j - 1] * (1 if i == j else 2) * beta(x)
        return float(total)

    # -- sampling ----------------------------------------------------------------
    def random_matrix_element(self, rng, N: int, degree: int = 4, decay: float = 2.0,
                              density: float = 0.7) -> MatrixElement:
        """Random element whose entries shrink like ``(i + j)^-decay``."""
        entries = {}
        for i, j in pair_indices(N):
            if rng.random() < density:
                scale = rng.uniform(0.2, 1.0) / (i + j) ** decay
                entries[(i, j)] = self.base.random_element(rng, degree, scale)
        return MatrixElement(self.base, entries, N)

    def random_state(self, rng, N: int):
        v = rng.normal(size=N) + 1j * rng.normal(size=N)
        beta = None
        if isinstance(self.base, CircleBase):
            beta = self.base.random_state(rng, atoms=1)
        return AmplifiedVectorState(v, beta)

    # -- serialisation -------------------------------------------------------------
    def element_to_json(self, G: MatrixElement):
        return {f"{i},{j}": self.base.element_to_json(x) for (i, j), x in G.items()}

    def element_from_json(self, payload) -> MatrixElement:
        entries = {}
        for key, value in payload.items():
            i, j = (int(s) for s in key.split(","))
            entries[(i, j)] = self.base.element_from_json(value)
        return MatrixElement(self.base, entries)


def lemma1_check(base, f):
    """``(||f||, (L(f) + |nu(f)|)(1 + d))``; callers assert ``lhs <= rhs``."""
    lhs = base.norm(f)
    rhs = (base.seminorm(f) + abs(base.nu(f))) * (1.0 + base.diameter_bound)
    return float(lhs), float(rhs)
