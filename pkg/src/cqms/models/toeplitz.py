"""Toeplitz extension of the disc: ``0 -> K -> T -> C(T) -> 0``.

Hardy space basis ``e_0, e_1, ...``; the compression of multiplication by
``f = sum c_n e^{in theta}`` has matrix entries ``(T_f)_{mn} = c_{m-n}``.
The splitting ``f -> T_f`` is positive and unital, and the ideal is
``K = K (x) C`` with the trivial base.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import toeplitz

from ..amplification import DEFAULT_K, Amplification, MatrixElement
from ..circle import DEFAULT_GRID, CircleBase, TrigPoly, TrivialBase, grid_angles
from ..exceptions import InvalidInputError, PreconditionError
from ..extension import ExtensionElement, SplitExtension
from ..numerics import min_eigenvalue_hermitian


def toeplitz_matrix(f: TrigPoly, M: int) -> np.ndarray:
    """``M x M`` compression ``(T_f)_{mn} = c_{m-n}``, ``m, n = 0..M-1``."""
    if M < 1:
        raise InvalidInputError(f"M must be >= 1, got {M}")
    n = np.arange(M)
    col = np.array([f.c(int(m)) for m in n])
    row = np.array([f.c(-int(m)) for m in n])
    T = toeplitz(col, row)
    return T.real.copy() if not np.any(T.imag) else T


def splitting_positivity_check(f: TrigPoly, M: int, grid: int = DEFAULT_GRID) -> float:
    """Smallest eigenvalue of ``T_f`` for a symbol that is nonnegative on the grid."""
    fmin = float(f(grid_angles(grid)).min())
    if fmin < -1e-12:
        raise PreconditionError(f"symbol is negative on the grid (min {fmin:.3g})")
    return min_eigenvalue_hermitian(toeplitz_matrix(f, M))


def embed_scalar_matrix(G: MatrixElement, M: int) -> np.ndarray:
    """Compression of ``G`` to the first ``M`` basis vectors (1-based ``i`` -> row ``i-1``)."""
    A = np.zeros((M, M))
    for (i, j), x in G.items():
        if j <= M:
            A[i - 1, j - 1] = A[j - 1, i - 1] = float(x)
    return A


def random_nonnegative_symbol(rng, degree: int) -> TrigPoly:
    """``|p|^2 + t`` for a random trigonometric polynomial ``p`` of half the degree."""
    half = max(degree // 2, 0)
    p = TrigPoly.from_cos_sin(rng.normal(), rng.normal(size=half), rng.normal(size=half))
    q = TrigPoly.from_cos_sin(rng.normal(), rng.normal(size=half), rng.normal(size=half))
    # |p + iq|^2 = p^2 + q^2 covers complex-coefficient squares
    return p * p + q * q + float(rng.uniform(0.0, 0.5))


class ToeplitzModel(SplitExtension):
    """The Toeplitz CQMS realised on the first ``M`` Hardy basis vectors."""

    name = "toeplitz"

    def __init__(self, M: int = 64, k: int = DEFAULT_K, grid: int = DEFAULT_GRID):
        if M < 1:
            raise InvalidInputError(f"M must be >= 1, got {M}")
        super().__init__(Amplification(TrivialBase(), k), CircleBase(grid))
        self.M = M
        self.dim = M

    def realize_ideal(self, G: MatrixElement) -> np.ndarray:
        return embed_scalar_matrix(G, self.M)

    def realize_splitting(self, f: TrigPoly) -> np.ndarray:
        return toeplitz_matrix(f, self.M)


def toeplitz_element(f: TrigPoly, G: MatrixElement | None = None) -> ExtensionElement:
    """Split-form element ``i(G) + T_f``."""
    if G is None:
        G = MatrixElement.zeros(TrivialBase())
    return ExtensionElement(G, f)
