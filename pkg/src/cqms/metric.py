"""Assembly of seminorm-ball linear programs and the state-space distance.

A CQMS instance describes its capped element space by a real parameter
vector and encodes the ball ``{L(a) <= 1}`` as linear rows on those
parameters plus auxiliary variables.  Functionals are covectors on the same
parameters, so

    rho_L(mu, lambda) = max { (w_mu - w_lambda) . p : L(p) <= 1 }

is a single LP.  The ball is symmetric under ``p -> -p``, so the maximum of
the signed difference equals the supremum of its absolute value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .exceptions import InvalidInputError
from .numerics import LinearProgram, solve_lp


@dataclass(frozen=True)
class Caps:
    """Truncation caps for distance computations.

    ``N`` bounds the matrix support of ideal parts, ``D`` the Fourier degree of
    quotient circle functions (checked on ``grid`` points).  Circle-valued
    matrix entries use the smaller ``ideal_degree``/``ideal_grid`` pair so the
    LP stays desk-sized.
    """

    N: int = 8
    D: int = 32
    grid: int = 4096
    ideal_degree: int = 4
    ideal_grid: int = 256

    def __post_init__(self):
        if self.N < 0 or self.D < 0 or self.ideal_degree < 0:
            raise InvalidInputError("caps must be nonnegative")
        if self.D >= 1 and self.grid < 64 * self.D:
            raise InvalidInputError(f"grid={self.grid} must be at least 64*D={64 * self.D}")
        if self.ideal_degree >= 1 and self.ideal_grid < 64 * self.ideal_degree:
            raise InvalidInputError(
                f"ideal_grid={self.ideal_grid} must be at least 64*ideal_degree"
            )

    def to_dict(self):
        return {
            "N": self.N,
            "D": self.D,
            "grid": self.grid,
            "ideal_degree": self.ideal_degree,
            "ideal_grid": self.ideal_grid,
        }


class BallLP:
    """Incremental builder for ``A_ub x <= b_ub`` rows over growing variables."""

    def __init__(self):
        self.n = 0
        self._lo: list[float | None] = []
        self._hi: list[float | None] = []
        self._rhs: list[np.ndarray] = []
        self._n_rows = 0
        self._entries: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []

    def add_vars(self, count, lo=None, hi=None) -> np.ndarray:
        idx = np.arange(self.n, self.n + count)
        self.n += count
        self._lo.extend([lo] * count)
        self._hi.extend([hi] * count)
        return idx

    def fix(self, idx, value=0.0):
        for i in np.atleast_1d(idx):
            self._lo[i] = value
            self._hi[i] = value

    def add_rows(self, cols, matrix, rhs):
        """Add rows ``matrix @ x[cols] <= rhs`` (``matrix`` dense, one row per constraint)."""
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        cols = np.asarray(cols)
        n_rows = matrix.shape[0]
        r, c = np.nonzero(matrix)
        self._entries.append((r + self._n_rows, cols[c], matrix[r, c]))
        self._rhs.append(np.broadcast_to(np.asarray(rhs, dtype=float), (n_rows,)).copy())
        self._n_rows += n_rows

    def add_abs_bound(self, cols, matrix, bound_var):
        """Encode ``|matrix @ x[cols]| <= x[bound_var]`` elementwise."""
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        ones = -np.ones((matrix.shape[0], 1))
        all_cols = np.concatenate([np.asarray(cols), [bound_var]])
        self.add_rows(all_cols, np.hstack([matrix, ones]), 0.0)
        self.add_rows(all_cols, np.hstack([-matrix, ones]), 0.0)

    def to_lp(self, objective) -> LinearProgram:
        if self._entries:
            rows = np.concatenate([e[0] for e in self._entries])
            cols = np.concatenate([e[1] for e in self._entries])
            vals = np.concatenate([e[2] for e in self._entries])
            A = sp.csr_matrix((vals, (rows, cols)), shape=(self._n_rows, self.n))
            b = np.concatenate(self._rhs)
        else:
            A, b = None, None
        return LinearProgram(objective, A_ub=A, b_ub=b, bounds=list(zip(self._lo, self._hi)))


def lp_distance(instance, w_s, w_t, caps: Caps, method: str = "highs-dual") -> float:
    """``sup { |s(a) - t(a)| : L(a) <= 1 }`` over the capped element space.

    ``instance`` must provide ``lp_ball(lp, caps) -> (param_idx, bound_idx, bound_coef)``
    and covectors ``w_s``, ``w_t`` over its ``param_dim(caps)`` parameters.
    """
    diff = np.asarray(w_s, dtype=float) - np.asarray(w_t, dtype=float)
    lp = BallLP()
    params, bidx, bcoef = instance.lp_ball(lp, caps)
    if diff.shape != (len(params),):
        raise InvalidInputError(
            f"covector length {diff.shape} does not match {len(params)} parameters at these caps"
        )
    if not np.any(diff):
        return 0.0
    lp.add_rows(bidx, np.asarray(bcoef)[None, :], 1.0)
    objective = np.zeros(lp.n)
    objective[params] = diff
    value, _ = solve_lp(lp.to_lp(objective), method=method)
    return abs(value)
