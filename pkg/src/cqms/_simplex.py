"""Dense two-phase tableau simplex with Bland's anti-cycling rule.

Only meant for small problems (a few hundred rows/columns); the tableau is a
dense numpy array and every pivot is a rank-one update.
"""

import numpy as np

from .exceptions import InfeasibleError, LPError, UnboundedError

_EPS = 1e-10


def _pivot(T, basis, row, col):
    T[row] /= T[row, col]
    factor = T[:, col].copy()
    factor[row] = 0.0
    T -= np.outer(factor, T[row])
    basis[row] = col


def _run(T, basis, n_cols, max_iter):
    """Maximise the objective stored in the last tableau row (as negated costs)."""
    m = T.shape[0] - 1
    for _ in range(max_iter):
        reduced = T[-1, :n_cols]
        candidates = np.flatnonzero(reduced < -_EPS)
        if candidates.size == 0:
            return
        col = int(candidates[0])  # Bland: lowest entering index
        column = T[:m, col]
        positive = column > _EPS
        if not positive.any():
            raise UnboundedError("objective is unbounded")
        ratios = np.full(m, np.inf)
        ratios[positive] = T[:m, -1][positive] / column[positive]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + _EPS * max(1.0, abs(best)))
        row = int(ties[np.argmin(basis[ties])])  # Bland: lowest leaving index
        _pivot(T, basis, row, col)
    raise LPError("simplex iteration limit reached")


def simplex_standard(c, A, b, max_iter=50_000):
    """Solve ``max c.x  s.t.  A x = b, x >= 0`` and return ``(value, x)``.

    Rows with negative right-hand side are flipped, phase one drives a full
    set of artificials to zero, then phase two optimises ``c``.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1

    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    basis = np.arange(n, n + m)
    # phase one: maximise -sum(artificials)
    T[-1, :n] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    _run(T, basis, n + m, max_iter)
    if -T[-1, -1] > 1e-8 * max(1.0, np.abs(b).max(initial=0.0)):
        raise InfeasibleError("linear program is infeasible")

    # drive remaining artificials out of the basis
    for row in range(m):
        if basis[row] >= n:
            nonzero = np.flatnonzero(np.abs(T[row, :n]) > _EPS)
            if nonzero.size:
                _pivot(T, basis, row, int(nonzero[0]))
    keep = basis < n
    T = np.vstack([T[:m][keep], T[-1:]])
    basis = basis[keep]
    T = np.hstack([T[:, :n], T[:, -1:]])

    T[-1] = 0.0
    T[-1, :n] = -c
    for row, var in enumerate(basis):
        T[-1] -= T[-1, var] * T[row]
    _run(T, basis, n, max_iter)

    x = np.zeros(n)
    x[basis] = T[:-1, -1]
    return float(c @ x), x
