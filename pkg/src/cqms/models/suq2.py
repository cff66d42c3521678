"""Quantum SU(2) on ``l2(N_0) (x) l2(Z)``, truncated.

Generators ``alpha = l sqrt(1 - q^{2N}) (x) I`` and ``beta = q^N (x) l`` where
``l`` is the down-shift.  The bilateral shift is identified with
multiplication by ``e^{-i theta}``, so a circle function ``g`` acts on the
second factor as the Laurent matrix ``(c_{m-m'})``.  The quotient map sends
``alpha -> e^{-i theta}`` and ``beta -> 0``; the splitting sends
``z^n -> l^n (x) I`` (``z = e^{-i theta}``), which on a real symbol ``f`` is
``T_f (x) I``.

Truncation keeps ``n = 0..M-1`` on the first factor and ``m = -W..W`` on the
second; basis index ``n * (2W + 1) + (m + W)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..amplification import DEFAULT_K, Amplification, MatrixElement
from ..circle import DEFAULT_GRID, CircleBase, TrigPoly
from ..exceptions import InvalidInputError
from ..extension import ExtensionElement, SplitExtension
from ..numerics import operator_norm
from .toeplitz import toeplitz_matrix

RELATIONS = (
    "alpha*alpha + beta*beta - I",
    "alpha alpha* + q^2 beta beta* - I",
    "alpha beta - q beta alpha",
    "alpha beta* - q beta* alpha",
    "beta*beta - beta beta*",
)

SELFADJOINT_TAGS = ("re_alpha", "im_alpha", "re_beta", "im_beta")


@dataclass(frozen=True)
class SuqParams:
    q: float = 0.5
    M: int = 64
    W: int = 16
    D: int = 32
    k: int = DEFAULT_K

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise InvalidInputError(f"q must lie in (0, 1), got {self.q}")
        if self.M < 2:
            raise InvalidInputError(f"M must be >= 2, got {self.M}")
        if self.W < 1:
            raise InvalidInputError(f"W must be >= 1, got {self.W}")
        if self.k <= 2:
            raise InvalidInputError(f"k must exceed 2, got {self.k}")

    @property
    def width(self) -> int:
        return 2 * self.W + 1


def _shift(n: int):
    """Down-shift ``e_j -> e_{j-1}``, ``e_0 -> 0`` on ``C^n``."""
    return sp.diags(np.ones(n - 1), 1, shape=(n, n), format="csr")


def _generators_sparse(p: SuqParams):
    n = np.arange(p.M)
    weight = sp.diags(np.sqrt(1.0 - p.q ** (2 * n)))
    alpha = sp.kron(_shift(p.M) @ weight, sp.identity(p.width), format="csr")
    beta = sp.kron(sp.diags(p.q ** n), _shift(p.width), format="csr")
    return alpha, beta


def generator_matrices(p: SuqParams):
    """Dense truncated ``(alpha, beta)`` on ``C^M (x) C^{2W+1}``."""
    alpha, beta = _generators_sparse(p)
    return alpha.toarray(), beta.toarray()


def interior_indices(p: SuqParams) -> np.ndarray:
    """Basis indices with ``n <= M-2`` and ``|m| <= W-1``."""
    n, m = np.meshgrid(np.arange(p.M - 1), np.arange(1, p.width - 1), indexing="ij")
    return (n * p.width + m).ravel()


def _residual_matrices(p: SuqParams):
    a, b = _generators_sparse(p)
    ad, bd = a.conj().T, b.conj().T
    eye = sp.identity(a.shape[0], format="csr")
    return {
        RELATIONS[0]: ad @ a + bd @ b - eye,
        RELATIONS[1]: a @ ad + p.q ** 2 * (b @ bd) - eye,
        RELATIONS[2]: a @ b - p.q * (b @ a),
        RELATIONS[3]: a @ bd - p.q * (bd @ a),
        RELATIONS[4]: bd @ b - b @ bd,
    }


def relation_residuals(p: SuqParams, interior: bool = True) -> dict:
    """Operator norms of the five relation residuals.

    With ``interior=True`` each residual is compressed to the interior block,
    where truncation of the two one-step shifts has no effect.
    """
    idx = interior_indices(p)
    out = {}
    for name, R in _residual_matrices(p).items():
        R = R.tocsr()
        if interior:
            R = R[idx][:, idx]
        R.eliminate_zeros()
        out[name] = operator_norm(R.toarray()) if R.nnz else 0.0
    return out


def residual_support(p: SuqParams, relation: str, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """``(n, m)`` labels of rows of a full residual with entries above ``tol``."""
    R = _residual_matrices(p)[relation].tocoo()
    rows = np.unique(R.row[np.abs(R.data) > tol])
    return rows // p.width, rows % p.width - p.W


def quotient_symbol(tag: str) -> TrigPoly:
    """Image of a generator expression in ``C(T)`` (selfadjoint parts only).

    ``alpha -> e^{-i theta}``: real part ``cos``, imaginary part ``-sin``;
    ``beta -> 0``; ``alpha*alpha -> 1``.
    """
    table = {
        "re_alpha": TrigPoly.cos(1),
        "im_alpha": TrigPoly.sin(1, -1.0),
        "re_beta": TrigPoly.constant(0.0),
        "im_beta": TrigPoly.constant(0.0),
        "beta": TrigPoly.constant(0.0),
        "alpha*alpha": TrigPoly.constant(1.0),
    }
    if tag not in table:
        raise InvalidInputError(f"unknown generator tag {tag!r}")
    return table[tag]


def selfadjoint_generator(tag: str, p: SuqParams) -> np.ndarray:
    """Dense truncated ``Re``/``Im`` part of ``alpha`` or ``beta``."""
    alpha, beta = generator_matrices(p)
    x = {"alpha": alpha, "beta": beta}[tag.split("_")[1]]
    if tag.startswith("re_"):
        return (x + x.conj().T) / 2
    return (x - x.conj().T) / 2j


class SuqModel(SplitExtension):
    """``C(SU_q(2))`` as the extension ``0 -> K (x) C(T) -> A -> C(T) -> 0``."""

    name = "suq2"

    def __init__(self, params: SuqParams = SuqParams(), grid: int = DEFAULT_GRID, nu=None):
        super().__init__(Amplification(CircleBase(grid, nu), params.k), CircleBase(grid))
        self.params = params
        self.dim = params.M * params.width

    def realize_ideal(self, G: MatrixElement) -> np.ndarray:
        p = self.params
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for (i, j), g in G.items():
            if j > p.M:
                continue
            block = toeplitz_matrix(g, p.width)
            rows = slice((i - 1) * p.width, i * p.width)
            cols = slice((j - 1) * p.width, j * p.width)
            out[rows, cols] += block
            if i != j:
                out[cols, rows] += block
        return out if np.any(out.imag) else out.real

    def realize_splitting(self, f: TrigPoly) -> np.ndarray:
        return np.kron(toeplitz_matrix(f, self.params.M), np.eye(self.params.width))

    def quadratic_form(self, a: ExtensionElement, v: np.ndarray) -> float:
        # v viewed as rows V[n] in C^{2W+1}; avoids the full kron product
        p = self.params
        V = np.asarray(v).reshape(p.M, p.width)
        gram = V.conj() @ V.T
        total = np.sum(toeplitz_matrix(a.f, p.M) * gram)
        for (i, j), g in a.G.items():
            if j > p.M:
                continue
            x, y = V[i - 1], V[j - 1]
            T = toeplitz_matrix(g, p.width)
            total += x.conj() @ T @ y
            if i != j:
                total += y.conj() @ T @ x
        return float(np.real(total))

    def decompose_selfadjoint(self, tag: str) -> ExtensionElement:
        return decompose_selfadjoint(tag, self.params, self.ideal.base)


def decompose_selfadjoint(tag: str, p: SuqParams, base: CircleBase | None = None) -> ExtensionElement:
    """Split form ``(G, f)`` of a selfadjoint generator part.

    ``re_beta``: ``G = diag(q^{n-1} cos)``, ``f = 0``.  ``im_beta``:
    ``G = diag(-q^{n-1} sin)``.  ``re_alpha``: ``f = cos`` and ``G`` has the
    constant entries ``(sqrt(1 - q^{2i}) - 1) / 2`` at ``(i, i+1)``.

    ``im_alpha`` has an ideal part with imaginary off-diagonal scalars, which
    is not a symmetric matrix of selfadjoint entries, so it is rejected.
    """
    base = base or CircleBase()
    entries = {}
    if tag in ("re_beta", "im_beta"):
        shape = TrigPoly.cos(1) if tag == "re_beta" else TrigPoly.sin(1, -1.0)
        for i in range(1, p.M + 1):
            entries[(i, i)] = p.q ** (i - 1) * shape
    elif tag == "re_alpha":
        for i in range(1, p.M):
            entries[(i, i + 1)] = TrigPoly.constant((np.sqrt(1.0 - p.q ** (2 * i)) - 1.0) / 2)
    elif tag == "im_alpha":
        raise InvalidInputError(
            "Im(alpha) - sigma(-sin) has imaginary off-diagonal scalar entries; "
            "it is not a symmetric matrix over selfadjoint circle functions"
        )
    else:
        raise InvalidInputError(f"unknown selfadjoint tag {tag!r}")
    return ExtensionElement(MatrixElement(base, entries, p.M), quotient_symbol(tag))
