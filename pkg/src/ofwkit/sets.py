"""Feasible regions: membership, linear minimization, projection, geometry.

Each set exposes a linear minimization oracle (``lmo``), which is the only
piece the projection-free learners touch, plus a Euclidean projection used
by reference oracles and the projected-gradient baseline. Balls are centered
at the origin; the simplex is the probability simplex.

``strong_convexity`` is the modulus with which the set body is strongly
convex with respect to the Euclidean norm (0 for polytopes). ``diameter``
is the Euclidean diameter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import as_vector, lp_norm

__all__ = [
    "DEFAULT_FEASIBILITY_TOL",
    "ZERO_GRADIENT_TOL",
    "FeasibleSet",
    "L2Ball",
    "LpBall",
    "L1Ball",
    "Simplex",
]

DEFAULT_FEASIBILITY_TOL = 1e-9
# Below this Euclidean gradient norm every feasible point minimizes the
# linear objective up to noise; the lmo then returns the anchor so runs
# stay deterministic.
ZERO_GRADIENT_TOL = 1e-12


@dataclass(frozen=True)
class FeasibleSet:
    """Base class: a compact convex subset of R^dim."""

    dim: int

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim!r}")

    # -- interface -------------------------------------------------------

    def contains(self, x, tol: float = DEFAULT_FEASIBILITY_TOL) -> bool:
        """Membership test with additive slack ``tol`` on the constraints."""
        raise NotImplementedError

    def lmo(self, g) -> np.ndarray:
        """A minimizer of <g, x> over the set.

        Gradients with Euclidean norm at most ``ZERO_GRADIENT_TOL`` are
        treated as ties and resolved to ``anchor()``.
        """
        g = as_vector(g, self.dim)
        if float(np.linalg.norm(g)) <= ZERO_GRADIENT_TOL:
            return self.anchor()
        return self._lmo(g)

    def project(self, x) -> np.ndarray:
        """Euclidean projection onto the set."""
        raise NotImplementedError

    def anchor(self) -> np.ndarray:
        """A canonical interior-ish starting point (origin or barycenter)."""
        raise NotImplementedError

    def random_feasible(self, seed: int) -> np.ndarray:
        """A feasible point drawn reproducibly from ``seed``."""
        raise NotImplementedError

    @property
    def diameter(self) -> float:
        raise NotImplementedError

    @property
    def strong_convexity(self) -> float:
        raise NotImplementedError

    # -- hooks -----------------------------------------------------------

    def _lmo(self, g: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class _Ball(FeasibleSet):
    """Shared behavior for norm balls centered at the origin."""

    radius: float

    def __post_init__(self):
        super().__post_init__()
        if not (self.radius > 0.0) or not np.isfinite(self.radius):
            raise ValueError(f"radius must be positive, got {self.radius!r}")

    def _norm(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def contains(self, x, tol: float = DEFAULT_FEASIBILITY_TOL) -> bool:
        x = as_vector(x, self.dim)
        return self._norm(x) <= self.radius + tol

    def anchor(self) -> np.ndarray:
        return np.zeros(self.dim)

    def random_feasible(self, seed: int) -> np.ndarray:
        # Random direction, then a radial factor that keeps the law
        # spread over the interior rather than piled on the boundary.
        rng = np.random.default_rng(seed)
        z = rng.standard_normal(self.dim)
        while float(np.linalg.norm(z)) < 1e-12:
            z = rng.standard_normal(self.dim)
        u = rng.uniform()
        scale = self.radius * u ** (1.0 / self.dim) / self._norm(z)
        return scale * z

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius


@dataclass(frozen=True)
class L2Ball(_Ball):
    """Euclidean ball {x : ||x||_2 <= radius}."""

    def _norm(self, x):
        return float(np.linalg.norm(x))

    def _lmo(self, g):
        return (-self.radius / float(np.linalg.norm(g))) * g

    def project(self, x):
        x = as_vector(x, self.dim)
        n = float(np.linalg.norm(x))
        if n <= self.radius:
            return x.copy()
        return (self.radius / n) * x

    @property
    def strong_convexity(self) -> float:
        return 1.0 / self.radius


@dataclass(frozen=True)
class LpBall(_Ball):
    """lp ball {x : ||x||_p <= radius} for p in (1, 2].

    These bodies are strongly convex, with modulus degrading in the
    dimension as d^(1/2 - 1/p).
    """

    p: float = 1.5

    def __post_init__(self):
        super().__post_init__()
        if not (1.0 < self.p <= 2.0):
            raise ValueError(f"p must lie in (1, 2], got {self.p!r}")

    def _norm(self, x):
        return lp_norm(x, self.p)

    def _lmo(self, g):
        # First-order condition on the boundary: the minimizer has
        # |x_i| proportional to |g_i|^(q-1) with q the dual exponent.
        # Normalizing by max|g_i| keeps the powers in a safe range.
        q = self.p / (self.p - 1.0)
        a = np.abs(g)
        u = a / float(a.max())
        w = u ** (q - 1.0)
        w /= lp_norm(w, self.p)
        return -self.radius * np.sign(g) * w

    def project(self, x):
        x = as_vector(x, self.dim)
        if self._norm(x) <= self.radius:
            return x.copy()
        a = np.abs(x)
        scale = float(a.max())
        a = a / scale
        target = self.radius / scale

        def residual(c):
            return lp_norm(_shrink_lp(a, c, self.p), self.p) - target

        # residual(0) > 0 since x is outside; grow the bracket until the
        # shrunk point is inside, then root-find the dual scale.
        hi = 1.0
        for _ in range(200):
            if residual(hi) <= 0.0:
                break
            hi *= 2.0
        else:
            raise RuntimeError("projection bracket failed to close")
        c = brentq(residual, 0.0, hi, xtol=1e-18, rtol=8.9e-16, maxiter=200)
        b = _shrink_lp(a, c, self.p)
        # Snap to the boundary so downstream feasibility checks at tight
        # tolerances see the projected point as inside.
        b *= target / lp_norm(b, self.p)
        return np.sign(x) * (scale * b)

    @property
    def strong_convexity(self) -> float:
        return (self.p - 1.0) * self.dim ** (0.5 - 1.0 / self.p) / self.radius


def _shrink_lp(a: np.ndarray, c: float, p: float) -> np.ndarray:
    """Solve b + c*b**(p-1) = a elementwise for b in [0, a].

    The map is increasing in b, so a fixed-depth bisection converges
    geometrically; 80 halvings put the bracket far below float spacing
    relative to each entry's scale.
    """
    if c <= 0.0:
        return a.copy()
    lo = np.zeros_like(a)
    hi = a.copy()
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        over = mid + c * mid ** (p - 1.0) > a
        hi = np.where(over, mid, hi)
        lo = np.where(over, lo, mid)
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class L1Ball(_Ball):
    """l1 ball {x : ||x||_1 <= radius}. A polytope, so modulus 0."""

    def _norm(self, x):
        return float(np.abs(x).sum())

    def _lmo(self, g):
        j = int(np.argmax(np.abs(g)))
        out = np.zeros(self.dim)
        out[j] = -self.radius * float(np.sign(g[j]))
        return out

    def project(self, x):
        x = as_vector(x, self.dim)
        if self._norm(x) <= self.radius:
            return x.copy()
        w = _project_simplex(np.abs(x), self.radius)
        return np.sign(x) * w

    @property
    def strong_convexity(self) -> float:
        return 0.0


@dataclass(frozen=True)
class Simplex(FeasibleSet):
    """Probability simplex {x : x >= 0, sum x = 1}. A polytope, modulus 0."""

    def contains(self, x, tol: float = DEFAULT_FEASIBILITY_TOL) -> bool:
        x = as_vector(x, self.dim)
        return bool(np.all(x >= -tol)) and abs(float(x.sum()) - 1.0) <= tol

    def _lmo(self, g):
        out = np.zeros(self.dim)
        out[int(np.argmin(g))] = 1.0
        return out

    def project(self, x):
        x = as_vector(x, self.dim)
        return _project_simplex(x, 1.0)

    def anchor(self) -> np.ndarray:
        return np.full(self.dim, 1.0 / self.dim)

    def random_feasible(self, seed: int) -> np.ndarray:
        rng = np.random.default_rng(seed)
        e = rng.exponential(size=self.dim)
        return e / float(e.sum())

    @property
    def diameter(self) -> float:
        # Largest Euclidean distance is between two vertices.
        return float(np.sqrt(2.0)) if self.dim > 1 else 0.0

    @property
    def strong_convexity(self) -> float:
        return 0.0


def _project_simplex(v: np.ndarray, total: float) -> np.ndarray:
    """Euclidean projection onto {w : w >= 0, sum w = total}.

    Sort-based active-set threshold; O(d log d).
    """
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u) - total
    counts = np.arange(1, v.shape[0] + 1)
    mask = u - cumulative / counts > 0.0
    rho = int(np.nonzero(mask)[0][-1])
    theta = cumulative[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)
