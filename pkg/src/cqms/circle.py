"""The circle algebra C(T) as a base CQMS, plus the degenerate base R.

Selfadjoint elements are real trigonometric polynomials ``f = sum c_n e^{in theta}``
with ``c_{-n} = conj(c_n)``.  The Lipschitz seminorm is ``sup |f'|`` for the
geodesic (arc length) metric, so the state-space metric is Wasserstein-1 on
the circle and the diameter is ``pi``.

Linear-program parameterisation at degree ``D``: ``[a_0, a_1..a_D, b_1..b_D]``
with ``f = a_0 + sum a_n cos(n theta) + b_n sin(n theta)``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .exceptions import InvalidInputError
from .metric import BallLP, Caps, lp_distance
from .numerics import TOL

DEFAULT_GRID = 4096


def grid_angles(grid: int) -> np.ndarray:
    return 2 * np.pi * np.arange(grid) / grid


class TrigPoly:
    """Real-valued trigonometric polynomial stored by its Fourier coefficients.

    ``coef[n + D]`` holds ``c_n`` for ``n`` in ``[-D, D]``.  Instances are
    immutable; arithmetic returns new polynomials.
    """

    __slots__ = ("_coef",)

    def __init__(self, coef):
        c = np.array(coef, dtype=complex).ravel()
        if c.size % 2 != 1:
            raise InvalidInputError("coefficient array must have odd length 2D+1")
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("coefficients must be finite")
        asym = np.abs(c - c[::-1].conj()).max()
        if asym > TOL.hermitian:
            raise InvalidInputError(
                f"coefficients are not hermitian-symmetric (deviation {asym:.3g})"
            )
        c = (c + c[::-1].conj()) / 2
        c.setflags(write=False)
        self._coef = c

    # -- constructors ---------------------------------------------------
    @classmethod
    def constant(cls, value: float) -> "TrigPoly":
        return cls([value])

    @classmethod
    def from_cos_sin(cls, a0, a=(), b=()) -> "TrigPoly":
        """``a0 + sum_n a[n-1] cos(n theta) + b[n-1] sin(n theta)``."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        D = max(a.size, b.size)
        a = np.pad(a, (0, D - a.size))
        b = np.pad(b, (0, D - b.size))
        pos = (a - 1j * b) / 2
        return cls(np.concatenate([pos[::-1].conj(), [a0], pos]))

    @classmethod
    def cos(cls, n: int = 1, amplitude: float = 1.0) -> "TrigPoly":
        a = np.zeros(n)
        a[n - 1] = amplitude
        return cls.from_cos_sin(0.0, a)

    @classmethod
    def sin(cls, n: int = 1, amplitude: float = 1.0) -> "TrigPoly":
        b = np.zeros(n)
        b[n - 1] = amplitude
        return cls.from_cos_sin(0.0, (), b)

    @classmethod
    def from_params(cls, p) -> "TrigPoly":
        p = np.asarray(p, dtype=float)
        D = (p.size - 1) // 2
        return cls.from_cos_sin(p[0], p[1:D + 1], p[D + 1:])

    @classmethod
    def from_pairs(cls, pairs) -> "TrigPoly":
        """From ``[[n, re, im], ...]`` triples (missing negative indices filled by symmetry)."""
        pairs = list(pairs)
        D = max((abs(int(n)) for n, _, _ in pairs), default=0)
        c = np.zeros(2 * D + 1, dtype=complex)
        given = np.zeros(2 * D + 1, dtype=bool)
        for n, re, im in pairs:
            c[int(n) + D] = complex(re, im)
            given[int(n) + D] = True
        missing = ~given & given[::-1]
        c[missing] = c[::-1].conj()[missing]
        return cls(c)

    # -- accessors ------------------------------------------------------
    @property
    def degree(self) -> int:
        return (self._coef.size - 1) // 2

    @property
    def coef(self) -> np.ndarray:
        return self._coef

    def c(self, n: int) -> complex:
        D = self.degree
        return complex(self._coef[n + D]) if abs(n) <= D else 0j

    def to_pairs(self):
        D = self.degree
        return [[n, float(self._coef[n + D].real), float(self._coef[n + D].imag)]
                for n in range(-D, D + 1) if self._coef[n + D] != 0]

    def params(self, degree: int | None = None) -> np.ndarray:
        """``[a_0, a_1..a_D, b_1..b_D]`` at ``degree`` (defaults to own degree)."""
        D = self.degree if degree is None else degree
        if self.trimmed().degree > D:
            raise InvalidInputError(f"polynomial of degree {self.trimmed().degree} exceeds cap {D}")
        pos = np.zeros(D, dtype=complex)
        m = min(D, self.degree)
        pos[:m] = self._coef[self.degree + 1:self.degree + 1 + m]
        return np.concatenate([[self._coef[self.degree].real], 2 * pos.real, -2 * pos.imag])

    def trimmed(self) -> "TrigPoly":
        nz = np.flatnonzero(self._coef != 0)
        if nz.size == 0:
            return TrigPoly([0.0])
        D = max(abs(int(nz[0]) - self.degree), abs(int(nz[-1]) - self.degree))
        return TrigPoly(self._coef[self.degree - D:self.degree + D + 1])

    def padded(self, degree: int) -> np.ndarray:
        """Coefficient array ``c_{-degree..degree}`` (zero-padded)."""
        f = self if degree >= self.degree else self.trimmed()
        if f.degree > degree:
            raise InvalidInputError(f"polynomial of degree {f.degree} exceeds cap {degree}")
        pad = degree - f.degree
        return np.pad(f._coef, (pad, pad))

    # -- evaluation -----------------------------------------------------
    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        n = np.arange(-self.degree, self.degree + 1)
        vals = np.exp(1j * np.multiply.outer(theta, n)) @ self._coef
        return vals.real if vals.ndim else float(vals.real)

    def derivative(self, theta):
        theta = np.asarray(theta, dtype=float)
        n = np.arange(-self.degree, self.degree + 1)
        vals = np.exp(1j * np.multiply.outer(theta, n)) @ (1j * n * self._coef)
        return vals.real if vals.ndim else float(vals.real)

    # -- arithmetic -----------------------------------------------------
    def _aligned(self, other):
        D = max(self.degree, other.degree)
        return self.padded(D), other.padded(D)

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = TrigPoly.constant(other)
        if not isinstance(other, TrigPoly):
            return NotImplemented
        x, y = self._aligned(other)
        return TrigPoly(x + y)

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly(-self._coef)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return TrigPoly(np.convolve(self._coef, other._coef))
        if isinstance(other, (int, float, np.floating, np.integer)):
            return TrigPoly(self._coef * float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        x, y = self._aligned(other)
        return bool(np.array_equal(x, y))

    __hash__ = None

    def __repr__(self):
        return f"TrigPoly(degree={self.degree}, coef={self._coef!r})"


class CircleState:
    """Finitely atomic probability measure on the circle."""

    def __init__(self, atoms):
        atoms = [(float(t), float(w)) for t, w in atoms]
        if not atoms:
            raise InvalidInputError("a state needs at least one atom")
        theta = np.array([t for t, _ in atoms])
        weights = np.array([w for _, w in atoms])
        if not np.all(np.isfinite(theta)) or not np.all(np.isfinite(weights)):
            raise InvalidInputError("atoms must be finite")
        if np.any(weights < 0):
            raise InvalidInputError("atom weights must be nonnegative")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise InvalidInputError(f"atom weights sum to {weights.sum()!r}, not 1")
        self.angles = np.mod(theta, 2 * np.pi)
        self.weights = weights

    @classmethod
    def point(cls, theta: float) -> "CircleState":
        return cls([(theta, 1.0)])

    def __call__(self, f: TrigPoly) -> float:
        return pair_state(self, f)

    def covector(self, degree: int) -> np.ndarray:
        n = np.arange(1, degree + 1)
        phase = np.multiply.outer(self.angles, n)
        return np.concatenate([
            [self.weights.sum()],
            self.weights @ np.cos(phase),
            self.weights @ np.sin(phase),
        ])

    def to_pairs(self):
        return [[float(t), float(w)] for t, w in zip(self.angles, self.weights)]

    def __repr__(self):
        return f"CircleState({self.to_pairs()})"


class HaarState:
    """Normalised Lebesgue measure on the circle."""

    def __call__(self, f: TrigPoly) -> float:
        return haar_state(f)

    def covector(self, degree: int) -> np.ndarray:
        w = np.zeros(2 * degree + 1)
        w[0] = 1.0
        return w

    def __repr__(self):
        return "HaarState()"


# -- operations -----------------------------------------------------------

def evaluate(f: TrigPoly, theta):
    """``f(theta)``; the imaginary round-off is discarded."""
    return f(theta)


def lip_seminorm(f: TrigPoly, grid: int = DEFAULT_GRID) -> float:
    """``max_g |f'(theta_g)|`` over ``grid`` equispaced angles (exact derivative)."""
    D = f.degree
    if D == 0:
        return 0.0
    if grid < 64 * f.trimmed().degree:
        raise InvalidInputError(f"grid={grid} too coarse for degree {f.trimmed().degree} (need >= 64*D)")
    return float(np.abs(f.derivative(grid_angles(grid))).max())


def sup_norm(f: TrigPoly, grid: int = DEFAULT_GRID) -> float:
    return float(np.abs(f(grid_angles(grid))).max())


def haar_state(f: TrigPoly) -> float:
    return float(f.c(0).real)


def pair_state(mu: CircleState, f: TrigPoly) -> float:
    return float(mu.weights @ f(mu.angles))


@lru_cache(maxsize=32)
def _derivative_matrix(degree: int, grid: int) -> np.ndarray:
    """Rows: ``f'(theta_g)`` as a linear form on ``[a_0, a_1..a_D, b_1..b_D]``."""
    theta = grid_angles(grid)
    n = np.arange(1, degree + 1)
    phase = np.multiply.outer(theta, n)
    M = np.hstack([np.zeros((grid, 1)), -n * np.sin(phase), n * np.cos(phase)])
    M.setflags(write=False)
    return M


def geodesic_distance(s: float, t: float) -> float:
    d = abs(np.mod(s, 2 * np.pi) - np.mod(t, 2 * np.pi))
    return float(min(d, 2 * np.pi - d))


class CircleBase:
    """C(T) with the geodesic Lipschitz seminorm and designated state ``nu``.

    Parameters
    ----------
    grid : int
        Number of equispaced angles used for sup-type quantities.
    nu : CircleState or None
        Designated state; ``None`` selects the Haar state.
    """

    name = "circle"
    diameter_bound = float(np.pi)

    def __init__(self, grid: int = DEFAULT_GRID, nu: CircleState | None = None):
        self.grid = grid
        self.designated = HaarState() if nu is None else nu

    # element-level
    def unit(self) -> TrigPoly:
        return TrigPoly.constant(1.0)

    def zero(self) -> TrigPoly:
        return TrigPoly.constant(0.0)

    def seminorm(self, f: TrigPoly) -> float:
        return lip_seminorm(f, self.grid)

    def nu(self, f: TrigPoly) -> float:
        return self.designated(f)

    def norm(self, f: TrigPoly) -> float:
        return sup_norm(f, self.grid)

    def sample(self, f: TrigPoly, thetas) -> np.ndarray:
        return f(thetas)

    def random_element(self, rng, degree: int = 4, scale: float = 1.0) -> TrigPoly:
        a0 = rng.normal()
        a = rng.normal(size=degree) / (1 + np.arange(degree))
        b = rng.normal(size=degree) / (1 + np.arange(degree))
        return TrigPoly.from_cos_sin(scale * a0, scale * a, scale * b)

    # as matrix entries of an ideal (role "entry")
    def entry_dim(self, caps: Caps) -> int:
        return 2 * caps.ideal_degree + 1

    def entry_params(self, f: TrigPoly, caps: Caps) -> np.ndarray:
        return f.params(caps.ideal_degree)

    def entry_from_params(self, p) -> TrigPoly:
        return TrigPoly.from_params(p)

    def entry_covector(self, state, caps: Caps) -> np.ndarray:
        return (self.designated if state is None else state).covector(caps.ideal_degree)

    def entry_basis(self, caps: Caps):
        dim = self.entry_dim(caps)
        return [TrigPoly.from_params(np.eye(dim)[i]) for i in range(dim)]

    def lp_entry(self, lp: BallLP, caps: Caps):
        """Parameters of one entry plus a bound expression ``>= L(f) + |nu(f)|``."""
        D = caps.ideal_degree
        p = lp.add_vars(2 * D + 1)
        t, s = lp.add_vars(2, lo=0.0)
        if D:
            lp.add_abs_bound(p, _derivative_matrix(D, caps.ideal_grid), t)
        lp.add_abs_bound(p, self.designated.covector(D)[None, :], s)
        return p, np.array([t, s]), np.ones(2)

    # as a standalone CQMS / quotient (role "quotient")
    def param_dim(self, caps: Caps) -> int:
        return 2 * caps.D + 1

    def to_params(self, f: TrigPoly, caps: Caps) -> np.ndarray:
        return f.params(caps.D)

    def from_params(self, p, caps: Caps | None = None) -> TrigPoly:
        return TrigPoly.from_params(p)

    def unit_index(self, caps: Caps) -> int:
        return 0

    def covector(self, state, caps: Caps) -> np.ndarray:
        if isinstance(state, np.ndarray):
            if state.shape != (self.param_dim(caps),):
                raise InvalidInputError("covector has the wrong length for these caps")
            return state
        return state.covector(caps.D)

    def lp_ball(self, lp: BallLP, caps: Caps):
        p = lp.add_vars(2 * caps.D + 1)
        lp.fix(p[0])  # constants are the kernel of L; states agree on them
        t = lp.add_vars(1, lo=0.0)
        if caps.D:
            lp.add_abs_bound(p, _derivative_matrix(caps.D, caps.grid), t[0])
        return p, t, np.ones(1)

    def distance(self, mu, lam, caps: Caps) -> float:
        return lp_distance(self, self.covector(mu, caps), self.covector(lam, caps), caps)

    def random_state(self, rng, atoms: int = 3) -> CircleState:
        w = rng.dirichlet(np.ones(atoms))
        w[-1] = 1.0 - w[:-1].sum()
        return CircleState(zip(rng.uniform(0, 2 * np.pi, atoms), w))

    # serialisation
    def element_to_json(self, f: TrigPoly):
        return f.to_pairs()

    def element_from_json(self, payload) -> TrigPoly:
        return TrigPoly.from_pairs(payload)


def circle_distance(mu: CircleState, lam: CircleState, D: int, grid: int = DEFAULT_GRID) -> float:
    """Lipschitz-ball distance between two circle states over degree-``D`` polynomials."""
    if D < 1:
        raise InvalidInputError(f"degree cap D must be >= 1, got {D}")
    caps = Caps(N=0, D=D, grid=grid)
    return CircleBase(grid).distance(mu, lam, caps)


def base_diameter(base) -> float:
    return base.diameter_bound


class TrivialBase:
    """The base algebra R: ``L = 0``, ``nu`` the identity, diameter 0."""

    name = "trivial"
    diameter_bound = 0.0

    def unit(self) -> float:
        return 1.0

    def zero(self) -> float:
        return 0.0

    def seminorm(self, x: float) -> float:
        return 0.0

    def nu(self, x: float) -> float:
        return float(x)

    def norm(self, x: float) -> float:
        return abs(float(x))

    def sample(self, x: float, thetas) -> np.ndarray:
        return np.full(np.shape(thetas), float(x))

    def random_element(self, rng, degree: int = 0, scale: float = 1.0) -> float:
        return float(scale * rng.normal())

    def entry_dim(self, caps: Caps) -> int:
        return 1

    def entry_params(self, x: float, caps: Caps) -> np.ndarray:
        return np.array([float(x)])

    def entry_from_params(self, p) -> float:
        return float(np.asarray(p)[0])

    def entry_covector(self, state, caps: Caps) -> np.ndarray:
        # R has exactly one state
        return np.ones(1)

    def entry_basis(self, caps: Caps):
        return [1.0]

    def lp_entry(self, lp: BallLP, caps: Caps):
        p = lp.add_vars(1)
        s = lp.add_vars(1, lo=0.0)
        lp.add_abs_bound(p, np.ones((1, 1)), s[0])
        return p, s, np.ones(1)

    def element_to_json(self, x: float):
        return float(x)

    def element_from_json(self, payload) -> float:
        return float(payload)
