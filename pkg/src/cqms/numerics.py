"""Dense matrix substrate: operator norms, hermitian eigenvalues, linear programs.

Every metric computation in the package funnels through :func:`operator_norm`,
:func:`min_eigenvalue_hermitian` and :func:`solve_lp`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from ._simplex import simplex_standard
from .exceptions import InfeasibleError, InvalidInputError, LPError, UnboundedError


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by the whole package."""

    hermitian: float = 1e-12
    eval_imag: float = 1e-10
    psd: float = 1e-10
    lp_feasibility: float = 1e-9
    lp_optimality: float = 1e-7
    power_rtol: float = 1e-12
    power_maxiter: int = 10_000


TOL = Tolerances()


def as_matrix(M) -> np.ndarray:
    """Validate ``M`` as a finite 2-d array and return it as an ndarray."""
    if sp.issparse(M):
        M = M.toarray()
    A = np.asarray(M)
    if A.ndim != 2 or A.size == 0:
        raise InvalidInputError(f"expected a non-empty 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("matrix has non-finite entries")
    return A


def is_hermitian(M, tol: float = TOL.hermitian) -> bool:
    A = as_matrix(M)
    return A.shape[0] == A.shape[1] and bool(np.all(np.abs(A - A.conj().T) <= tol))


def _strip_zero_lines(A):
    rows = np.flatnonzero(np.any(A != 0, axis=1))
    cols = np.flatnonzero(np.any(A != 0, axis=0))
    return A[np.ix_(rows, cols)]


def _power_norm(A, rtol, maxiter):
    # deterministic start vector: all ones plus a small ramp to avoid orthogonality
    n = A.shape[1]
    x = np.ones(n, dtype=A.dtype) + np.linspace(0.0, 1e-3, n)
    x /= np.linalg.norm(x)
    sigma = 0.0
    for _ in range(maxiter):
        y = A.conj().T @ (A @ x)
        norm_y = np.linalg.norm(y)
        if norm_y == 0.0:
            return 0.0
        new_sigma = np.sqrt(norm_y)
        x = y / norm_y
        if abs(new_sigma - sigma) <= rtol * new_sigma:
            return float(new_sigma)
        sigma = new_sigma
    return float(sigma)


def operator_norm(M, method: str = "svd", tol: Tolerances = TOL) -> float:
    """Largest singular value of ``M``.

    ``method="svd"`` uses LAPACK; ``method="power"`` runs power iteration on
    ``M* M`` and stops on relative change below ``tol.power_rtol``.
    Identically-zero rows and columns are removed first (this leaves the norm
    unchanged and keeps residual checks on large, mostly-zero matrices cheap).
    """
    A = as_matrix(M)
    A = _strip_zero_lines(A)
    if A.size == 0:
        return 0.0
    if method == "svd":
        if A.shape[0] == 1 or A.shape[1] == 1:
            return float(np.linalg.norm(A))
        return float(np.linalg.norm(A, 2))
    if method == "power":
        return _power_norm(A, tol.power_rtol, tol.power_maxiter)
    raise InvalidInputError(f"unknown norm method {method!r}")


def _symmetrized(M, tol):
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"matrix is not square: {A.shape}")
    dev = np.abs(A - A.conj().T).max()
    if dev > tol.hermitian:
        raise InvalidInputError(f"matrix is not hermitian (deviation {dev:.3g})")
    return (A + A.conj().T) / 2


def min_eigenvalue_hermitian(M, tol: Tolerances = TOL) -> float:
    """Smallest eigenvalue of a hermitian matrix (symmetrised before solving)."""
    return float(np.linalg.eigvalsh(_symmetrized(M, tol))[0])


def hermitian_norms(stack) -> np.ndarray:
    """Operator norms of a stack ``(..., n, n)`` of hermitian matrices.

    Batched helper for sup-over-grid computations; symmetry is assumed, not checked.
    """
    w = np.linalg.eigvalsh(stack)
    return np.maximum(np.abs(w[..., 0]), np.abs(w[..., -1]))


# --------------------------------------------------------------------------
# linear programming


@dataclass
class LinearProgram:
    """``maximize objective . x`` subject to linear rows and optional boxes.

    ``A_ub``/``A_eq`` may be dense arrays or scipy sparse matrices. ``bounds``
    is a sequence of ``(lo, hi)`` pairs (``None`` meaning infinite) or ``None``
    for all variables free.
    """

    objective: np.ndarray
    A_ub: object = None
    b_ub: np.ndarray | None = None
    A_eq: object = None
    b_eq: np.ndarray | None = None
    bounds: Sequence[tuple] | None = None
    sense: str = "max"
    _n: int = field(init=False, repr=False)

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        self._n = self.objective.shape[0]
        for name in ("A_ub", "A_eq"):
            A = getattr(self, name)
            if A is not None and A.shape[1] != self._n:
                raise InvalidInputError(
                    f"{name} has {A.shape[1]} columns, objective has {self._n}"
                )
        if self.bounds is not None and len(self.bounds) != self._n:
            raise InvalidInputError("bounds length differs from the number of variables")
        if self.sense not in ("max", "min"):
            raise InvalidInputError(f"sense must be 'max' or 'min', got {self.sense!r}")

    @property
    def n_vars(self) -> int:
        return self._n

    @classmethod
    def from_rows(cls, objective, constraints, bounds=None, sense="max"):
        """Build from ``(coefficients, relation, bound)`` rows, relation in ``{"<=", "=", ">="}``."""
        n = len(objective)
        ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
        for coefs, rel, rhs in constraints:
            coefs = np.asarray(coefs, dtype=float)
            if coefs.shape != (n,):
                raise InvalidInputError("constraint coefficient vectors must match the objective length")
            if rel == "<=":
                ub_rows.append(coefs)
                ub_rhs.append(rhs)
            elif rel == ">=":
                ub_rows.append(-coefs)
                ub_rhs.append(-rhs)
            elif rel in ("=", "=="):
                eq_rows.append(coefs)
                eq_rhs.append(rhs)
            else:
                raise InvalidInputError(f"unknown relation {rel!r}")
        return cls(
            objective,
            A_ub=np.array(ub_rows) if ub_rows else None,
            b_ub=np.array(ub_rhs, dtype=float) if ub_rows else None,
            A_eq=np.array(eq_rows) if eq_rows else None,
            b_eq=np.array(eq_rhs, dtype=float) if eq_rows else None,
            bounds=bounds,
            sense=sense,
        )

    def residual(self, x) -> float:
        """Largest constraint violation at ``x`` (0 for a feasible point)."""
        x = np.asarray(x, dtype=float)
        worst = 0.0
        if self.A_ub is not None:
            worst = max(worst, float(np.max(self.A_ub @ x - self.b_ub, initial=0.0)))
        if self.A_eq is not None:
            worst = max(worst, float(np.max(np.abs(self.A_eq @ x - self.b_eq), initial=0.0)))
        if self.bounds is not None:
            for xi, (lo, hi) in zip(x, self.bounds):
                if lo is not None:
                    worst = max(worst, lo - xi)
                if hi is not None:
                    worst = max(worst, xi - hi)
        return worst


class LPSolution(NamedTuple):
    value: float
    witness: np.ndarray


# HiGHS rejects some problems at very tight tolerances; walk outward until it accepts.
_HIGHS_LADDER = (2e-10, 5e-10, 1e-9)


def _solve_highs(lp: LinearProgram, tol: Tolerances) -> LPSolution:
    sign = -1.0 if lp.sense == "max" else 1.0
    ladder = [t for t in _HIGHS_LADDER if t <= tol.lp_feasibility] or [tol.lp_feasibility]
    res = None
    for t in ladder:
        res = linprog(
            sign * lp.objective,
            A_ub=lp.A_ub,
            b_ub=lp.b_ub,
            A_eq=lp.A_eq,
            b_eq=lp.b_eq,
            bounds=lp.bounds if lp.bounds is not None else (None, None),
            method="highs",
            options={"primal_feasibility_tolerance": t, "dual_feasibility_tolerance": t},
        )
        if res.status in (0, 2, 3):
            break
    if res.status == 2:
        raise InfeasibleError(res.message)
    if res.status == 3:
        raise UnboundedError(res.message)
    if res.status != 0:
        raise LPError(f"LP solver failed: {res.message}")
    return LPSolution(float(lp.objective @ res.x), res.x)


def _solve_simplex(lp: LinearProgram) -> LPSolution:
    n = lp.n_vars
    bounds = lp.bounds if lp.bounds is not None else [(None, None)] * n
    # x = offset + S y with y >= 0
    offset = np.zeros(n)
    columns = []
    extra_rows = []
    for j, (lo, hi) in enumerate(bounds):
        col = np.zeros(n)
        if lo is not None:
            offset[j] = lo
            col[j] = 1.0
            columns.append(col)
            if hi is not None:
                extra_rows.append((len(columns) - 1, hi - lo))
        elif hi is not None:
            offset[j] = hi
            col[j] = -1.0
            columns.append(col)
        else:
            col[j] = 1.0
            columns.append(col)
            columns.append(-col)
    S = np.array(columns).T
    k = S.shape[1]

    def dense(A):
        return A.toarray() if sp.issparse(A) else np.asarray(A, dtype=float)

    ub_A, ub_b = [], []
    if lp.A_ub is not None:
        A = dense(lp.A_ub)
        ub_A.append(A @ S)
        ub_b.append(lp.b_ub - A @ offset)
    for idx, width in extra_rows:
        row = np.zeros((1, k))
        row[0, idx] = 1.0
        ub_A.append(row)
        ub_b.append(np.array([width]))
    n_ub = sum(a.shape[0] for a in ub_A)
    blocks, rhs = [], []
    if n_ub:
        blocks.append(np.hstack([np.vstack(ub_A), np.eye(n_ub)]))
        rhs.append(np.concatenate(ub_b))
    if lp.A_eq is not None:
        A = dense(lp.A_eq)
        blocks.append(np.hstack([A @ S, np.zeros((A.shape[0], n_ub))]))
        rhs.append(lp.b_eq - A @ offset)
    if not blocks:
        # no constraints: bounded only if the objective is flat in every free direction
        c = S.T @ lp.objective
        if np.any(c > 0 if lp.sense == "max" else c < 0):
            raise UnboundedError("objective is unbounded")
        return LPSolution(float(lp.objective @ offset), offset)
    A_std = np.vstack(blocks)
    b_std = np.concatenate(rhs)
    sign = 1.0 if lp.sense == "max" else -1.0
    c_std = np.concatenate([sign * (S.T @ lp.objective), np.zeros(n_ub)])
    _, y = simplex_standard(c_std, A_std, b_std)
    x = offset + S @ y[:k]
    return LPSolution(float(lp.objective @ x), x)


def _standardize(lp: LinearProgram):
    """Rewrite as ``max c' y + const`` s.t. ``A' y <= b'`` with ``y = (free | nonnegative)``.

    Returns ``(c', A', b', n_free, const, lift)`` where ``lift`` maps ``y`` back to ``x``.
    """
    n = lp.n_vars
    sign = 1.0 if lp.sense == "max" else -1.0
    c = sign * lp.objective
    bounds = lp.bounds if lp.bounds is not None else [(None, None)] * n
    A = sp.csr_matrix(lp.A_ub) if lp.A_ub is not None else sp.csr_matrix((0, n))
    b = np.asarray(lp.b_ub, dtype=float) if lp.A_ub is not None else np.zeros(0)
    rows, rhs = [A], [b]
    if lp.A_eq is not None:
        E = sp.csr_matrix(lp.A_eq)
        rows += [E, -E]
        rhs += [lp.b_eq, -np.asarray(lp.b_eq, dtype=float)]
    A = sp.vstack(rows, format="csc")
    b = np.concatenate(rhs)

    offset = np.zeros(n)
    scale = np.ones(n)
    free, nonneg, extra = [], [], []
    for j, (lo, hi) in enumerate(bounds):
        if lo is not None and hi is not None and lo == hi:
            offset[j] = lo
        elif lo is not None:
            offset[j] = lo
            nonneg.append(j)
            if hi is not None:
                extra.append((j, hi - lo))
        elif hi is not None:
            offset[j], scale[j] = hi, -1.0
            nonneg.append(j)
        else:
            free.append(j)
    keep = np.array(free + nonneg, dtype=int)
    b = b - A @ offset
    A = (A @ sp.diags(scale))[:, keep]
    if extra:
        pos = {j: k for k, j in enumerate(keep)}
        E = sp.csr_matrix(
            (np.ones(len(extra)), (np.arange(len(extra)), [pos[j] for j, _ in extra])),
            shape=(len(extra), len(keep)),
        )
        A = sp.vstack([A, E])
        b = np.concatenate([b, [w for _, w in extra]])
    c_red = (c * scale)[keep]
    const = float(c @ offset)

    def lift(y):
        x = offset.copy()
        x[keep] += scale[keep] * y
        return x

    return c_red, sp.csr_matrix(A), b, len(free), const, lift


def _solve_highs_dual(lp: LinearProgram) -> LPSolution:
    """Solve through the dual ``min b' u`` s.t. ``A'^T u (=|>=) c'``, ``u >= 0``.

    Distance programs have a few hundred parameters and thousands of sup-norm
    rows; the dual has one row per parameter, which suits simplex. HiGHS runs
    at its default tolerances (tightening them costs 5x for no gain in the
    value), so the witness read off the dual marginals is feasible only to
    about 1e-7.
    """
    c, A, b, n_free, const, lift = _standardize(lp)
    if A.shape[0] == 0:
        return _solve_simplex(lp)
    At = A.T.tocsr()
    A_eq, b_eq = At[:n_free], c[:n_free]
    A_ub, b_ub = -At[n_free:], -c[n_free:]
    res = linprog(
        b,
        A_ub=A_ub if A_ub.shape[0] else None,
        b_ub=b_ub if A_ub.shape[0] else None,
        A_eq=A_eq if n_free else None,
        b_eq=b_eq if n_free else None,
        bounds=(0, None),
        method="highs-ds",
        options={"presolve": False},
    )
    if res.status == 2:
        raise UnboundedError(f"dual program infeasible: {res.message}")
    if res.status == 3:
        raise InfeasibleError(f"dual program unbounded: {res.message}")
    if res.status != 0:
        raise LPError(f"LP solver failed: {res.message}")
    y = np.zeros(len(c))
    if n_free:
        y[:n_free] = res.eqlin.marginals
    if len(c) > n_free:
        y[n_free:] = -res.ineqlin.marginals
    sign = 1.0 if lp.sense == "max" else -1.0
    return LPSolution(sign * (float(res.fun) + const), lift(y))


def solve_lp(lp: LinearProgram, method: str = "highs", tol: Tolerances = TOL) -> LPSolution:
    """Solve ``lp`` and return ``(optimal value, witness)``.

    ``method="highs"`` passes the program to scipy's HiGHS interface with the
    witness held to ``tol.lp_feasibility``; ``method="highs-dual"`` solves the
    dual instead (much faster for the tall sup-norm programs behind the
    distance computations, witness feasible to about 1e-7 only);
    ``method="simplex"`` is the in-package dense Bland-rule simplex for small
    problems. Raises :class:`InfeasibleError` or :class:`UnboundedError`.
    """
    if method == "highs":
        return _solve_highs(lp, tol)
    if method == "highs-dual":
        return _solve_highs_dual(lp)
    if method == "simplex":
        return _solve_simplex(lp)
    raise InvalidInputError(f"unknown LP method {method!r}")
