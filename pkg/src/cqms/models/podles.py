"""Podles sphere ``C(S^2_qc)`` through its representations ``pi_+`` and ``pi_-``.

On ``l2(N_0)`` with basis ``e_n``:

    pi_(A) e_n = lambda q^{2n} e_n,    pi_(B) e_n = sqrt(c(n)) e_{n-1},
    c(n) = lambda q^{2n} - (lambda q^{2n})^2 + c,

with ``lambda_(+/-) = 1/2 +/- sqrt(c + 1/4)``.  The algebra is the pullback of
two Toeplitz algebras over the symbol map: pairs ``(x + G, x)`` with ``x`` a
Toeplitz element and ``G`` compact.  As an extension it is
``0 -> K -> C(S^2_qc) -> T -> 0`` with quotient map ``(x + G, x) -> x`` and
splitting ``x -> (x, x)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from ..amplification import DEFAULT_K, Amplification, MatrixElement
from ..circle import DEFAULT_GRID, TrigPoly, TrivialBase
from ..exceptions import InvalidInputError
from ..extension import ExtensionElement, SplitExtension
from ..numerics import operator_norm
from .toeplitz import ToeplitzModel, toeplitz_element

RELATIONS = (
    "A* - A",
    "B*B - (A - A^2 + cI)",
    "BA - q^2 AB",
    "BB* - (q^2 A - q^4 A^2 + cI)",
    "BB* - (q^2 A - q^4 + cI)",
)
#: relation as printed literally; the representation does not satisfy it
LITERAL_RELATION = RELATIONS[4]

SIGNS = ("+", "-")


def _check_sign(sign: str):
    if sign not in SIGNS:
        raise InvalidInputError(f"sign must be '+' or '-', got {sign!r}")


@dataclass(frozen=True)
class PodlesParams:
    q: float = 0.5
    c: float = 2.0
    M: int = 48
    k: int = DEFAULT_K

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise InvalidInputError(f"q must lie in (0, 1), got {self.q}")
        if not self.c > 0:
            raise InvalidInputError(f"c must be positive, got {self.c}")
        if self.M < 2:
            raise InvalidInputError(f"M must be >= 2, got {self.M}")
        if self.k <= 2:
            raise InvalidInputError(f"k must exceed 2, got {self.k}")

    def lam(self, sign: str) -> float:
        _check_sign(sign)
        root = np.sqrt(self.c + 0.25)
        return 0.5 + root if sign == "+" else 0.5 - root


def weights(p: PodlesParams, n, sign: str):
    """``c_(+/-)(n)``; vectorised over ``n``.  Nonnegative up to round-off."""
    n = np.asarray(n)
    if np.any(n < 0):
        raise InvalidInputError("weight index must be nonnegative")
    x = p.lam(sign) * p.q ** (2 * n)
    out = x - x * x + p.c
    return float(out) if out.ndim == 0 else out


def _sqrt_weights(p: PodlesParams, sign: str) -> np.ndarray:
    return np.sqrt(np.clip(weights(p, np.arange(p.M), sign), 0.0, None))


def generator_matrices(p: PodlesParams, sign: str):
    """``(A, B)`` as ``M x M`` matrices of ``pi_(sign)``."""
    n = np.arange(p.M)
    A = np.diag(p.lam(sign) * p.q ** (2 * n))
    # B e_n = sqrt(c(n)) e_{n-1}: entry (n-1, n)
    B = np.diag(_sqrt_weights(p, sign)[1:], 1)
    return A, B


def relation_residuals(p: PodlesParams, sign: str, interior: bool = True) -> dict:
    """Operator norms of the relation residuals (last one is the literal variant).

    With ``interior=True`` residuals are compressed to indices ``<= M-2``.
    """
    A, B = generator_matrices(p, sign)
    Bs = B.conj().T
    eye = np.eye(p.M)
    q2, q4 = p.q ** 2, p.q ** 4
    mats = {
        RELATIONS[0]: A.conj().T - A,
        RELATIONS[1]: Bs @ B - (A - A @ A + p.c * eye),
        RELATIONS[2]: B @ A - q2 * (A @ B),
        RELATIONS[3]: B @ Bs - (q2 * A - q4 * (A @ A) + p.c * eye),
        RELATIONS[4]: B @ Bs - (q2 * A - q4 * eye + p.c * eye),
    }
    keep = slice(0, p.M - 1) if interior else slice(None)
    out = {}
    for name, R in mats.items():
        R = R[keep, keep]
        out[name] = operator_norm(R) if np.any(R) else 0.0
    return out


def symbol_limit_check(p: PodlesParams, sign: str) -> dict:
    """Decay of ``|sqrt(c(n)) - sqrt(c)|`` toward the common symbol ``sqrt(c)``.

    The bound ``|sqrt(c(n)) - sqrt(c)| <= K q^{2n}`` is checked with
    ``K = |lambda| (1 + |lambda|) / sqrt(c)``, which follows from
    ``|x - x^2| <= |x| (1 + |x|)`` and ``sqrt(c(n)) + sqrt(c) >= sqrt(c)``.
    The fitted ratio is the least-squares geometric rate of the nonzero tail.
    """
    lam = p.lam(sign)
    n = np.arange(p.M)
    diffs = np.abs(_sqrt_weights(p, sign) - np.sqrt(p.c))
    K = abs(lam) * (1.0 + abs(lam)) / np.sqrt(p.c)
    envelope = K * p.q ** (2 * n)
    usable = diffs > 1e-14
    ratio = float("nan")
    if usable.sum() >= 2:
        slope = np.polyfit(n[usable], np.log(diffs[usable]), 1)[0]
        ratio = float(np.exp(slope))
    tail = n[np.abs(lam) * p.q ** (2 * n) < 0.5]
    start = int(tail[0]) if tail.size else p.M
    tail_diffs = diffs[start:]
    return {
        "sign": sign,
        "differences": diffs,
        "K": float(K),
        "envelope": envelope,
        "bounded": bool(np.all(diffs <= envelope + 1e-12)),
        "fitted_ratio": ratio,
        "monotone_from": start,
        "monotone_tail": bool(np.all(np.diff(tail_diffs) <= 1e-15)),
        "limit": float(np.sqrt(p.c)),
    }


class PodlesModel(SplitExtension):
    """Nested CQMS: ideal ``K`` (trivial base) over the Toeplitz CQMS."""

    name = "podles"

    def __init__(self, params: PodlesParams = PodlesParams(), grid: int = DEFAULT_GRID, toeplitz_k: int = DEFAULT_K):
        super().__init__(Amplification(TrivialBase(), params.k), ToeplitzModel(params.M, toeplitz_k, grid))
        self.params = params
        self.dim = 2 * params.M

    def realize_ideal(self, G: MatrixElement) -> np.ndarray:
        M = self.params.M
        return block_diag(self.quotient.realize_ideal(G), np.zeros((M, M)))

    def realize_splitting(self, x: ExtensionElement) -> np.ndarray:
        R = self.quotient.realize(x)
        return block_diag(R, R)

    def coordinates(self, a: ExtensionElement):
        """The pair ``(x + G, x)`` of ``M x M`` matrices."""
        R = self.quotient.realize(a.f)
        return R + self.quotient.realize_ideal(a.G), R

    def norm(self, a: ExtensionElement) -> float:
        # faithful direct sum: the norm is the larger of the two coordinate norms
        return max(operator_norm(X) if np.any(X) else 0.0 for X in self.coordinates(a))

    def decompose_generator(self, tag: str) -> ExtensionElement:
        return decompose_generator(tag, self.params)


def podles_element(x: ExtensionElement, G: MatrixElement | None = None) -> ExtensionElement:
    """Nested split form of ``(x + G, x)``."""
    if G is None:
        G = MatrixElement.zeros(TrivialBase())
    return ExtensionElement(G, x)


def decompose_generator(tag: str, p: PodlesParams) -> ExtensionElement:
    """Split form of ``A`` or ``Re B`` with ``pi_+`` as first and ``pi_-`` as second coordinate.

    ``A``: ``x = diag(lambda_- q^{2n})`` (compact, zero symbol) and
    ``G = diag((lambda_+ - lambda_-) q^{2n})``.
    ``B_re``: ``x`` has symbol ``sqrt(c) cos`` with off-diagonal correction
    ``(sqrt(c_-(n)) - sqrt(c)) / 2``, and ``G`` carries
    ``(sqrt(c_+(n)) - sqrt(c_-(n))) / 2``.  ``Im B`` would need imaginary
    antisymmetric entries and is rejected.
    """
    base = TrivialBase()
    M = p.M
    if tag == "A":
        lp, lm = p.lam("+"), p.lam("-")
        Gx = {(i, i): lm * p.q ** (2 * (i - 1)) for i in range(1, M + 1)}
        G = {(i, i): (lp - lm) * p.q ** (2 * (i - 1)) for i in range(1, M + 1)}
        f = TrigPoly.constant(0.0)
    elif tag == "B_re":
        sp_, sm = _sqrt_weights(p, "+"), _sqrt_weights(p, "-")
        root = np.sqrt(p.c)
        # 0-based entry (n-1, n) is 1-based (n, n+1)
        Gx = {(n, n + 1): (sm[n] - root) / 2 for n in range(1, M)}
        G = {(n, n + 1): (sp_[n] - sm[n]) / 2 for n in range(1, M)}
        f = TrigPoly.cos(1, root)
    elif tag == "B_im":
        raise InvalidInputError(
            "Im(B) has imaginary antisymmetric corrections; it is not a symmetric real matrix element"
        )
    else:
        raise InvalidInputError(f"unknown generator tag {tag!r}")
    x = toeplitz_element(f, MatrixElement(base, Gx, M))
    return podles_element(x, MatrixElement(base, G, M))
