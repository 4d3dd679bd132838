"""Spheres of revolution given by a profile u(z) on [a, b].

The surface is {(u(z)cos θ, u(z)sin θ, z)}; u vanishes at the poles a, b and has
a single interior maximum at the equator height z0.

Besides u and u′ a profile offers three evaluation hooks that receive exact
distances to the relevant interval ends: ``radius_sq`` (u²), ``speed_sq``
(1 + u′²) and ``clairaut_gap`` (h·u² − j²). Quadrature callers pass those
distances so that integrands with inverse square-root endpoints keep full
accuracy. The base class falls back to evaluating u at z; the spheroid and egg
profiles override the hooks with factored closed forms.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .numerics import find_root

logger = logging.getLogger(__name__)

# Below this relative distance to a turning point the Clairaut gap is linearised.
_LINEAR_BAND = 1e-6


@dataclass(frozen=True)
class TurningPair:
    """Roots z₋ ≤ z₊ of h·u(z)² = j², with exact distances to the poles."""

    z_minus: float
    z_plus: float
    h: float = 1.0
    j: float = 0.0
    below: float = 0.0
    above: float = 0.0

    @property
    def width(self) -> float:
        return self.z_plus - self.z_minus


@dataclass(frozen=True, eq=False)
class SurfaceProfile:
    u: Callable
    du: Callable
    a: float
    b: float
    z0: float
    label: str = "profile"
    d2u: Optional[Callable] = None

    exact = False

    def __post_init__(self) -> None:
        if not self.a < self.z0 < self.b:
            raise DomainError(f"{self.label}: need a < z0 < b, got {self.a}, {self.z0}, {self.b}")

    @property
    def equator_radius(self) -> float:
        return float(self.u(self.z0))

    # -- evaluation hooks -------------------------------------------------

    def radius_sq(self, z, da, db):
        return np.asarray(self.u(z), dtype=float) ** 2

    def speed_sq(self, z, da, db):
        return 1.0 + np.asarray(self.du(z), dtype=float) ** 2

    def clairaut_gap(self, z, pair: TurningPair, dm, dp):
        gap = pair.h * np.asarray(self.u(z), dtype=float) ** 2 - pair.j ** 2
        if pair.width <= 0.0 or pair.j == 0.0:
            return gap
        # u² − u(z±)² loses all digits next to z±; use the tangent line there
        with np.errstate(divide="ignore", invalid="ignore"):
            slope_m = 2.0 * pair.h * float(self.u(pair.z_minus)) * float(self.du(pair.z_minus))
            slope_p = -2.0 * pair.h * float(self.u(pair.z_plus)) * float(self.du(pair.z_plus))
        if not (math.isfinite(slope_m) and math.isfinite(slope_p)):
            return gap
        band = _LINEAR_BAND * pair.width
        dm = np.asarray(dm, dtype=float)
        dp = np.asarray(dp, dtype=float)
        linear = np.where(dm <= dp, slope_m * dm, slope_p * dp)
        return np.where(np.minimum(dm, dp) < band, linear, gap)

    # -- turning points ---------------------------------------------------

    def _check_band(self, h: float, j: float) -> float:
        if not 0.0 < h <= 1.0:
            raise DomainError(f"energy h must lie in (0, 1], got {h}")
        limit = self.equator_radius * math.sqrt(h)
        if abs(j) > limit * (1.0 + 1e-14):
            raise DomainError(f"|j| = {abs(j)} exceeds u(z0)·√h = {limit} (outside region B)")
        return limit

    def turning_points(self, h: float = 1.0, j: float = 0.0) -> TurningPair:
        """Generic turning points by bracketed root finding."""
        limit = self._check_band(h, j)
        if j == 0.0:
            return TurningPair(self.a, self.b, h, j, 0.0, 0.0)
        if abs(j) >= limit:
            return TurningPair(self.z0, self.z0, h, j, self.z0 - self.a, self.b - self.z0)

        def phi(z: float) -> float:
            return h * float(self.u(z)) ** 2 - j * j

        z_minus = find_root(phi, self.a, self.z0)
        z_plus = find_root(phi, self.z0, self.b)
        return TurningPair(z_minus, z_plus, h, j, z_minus - self.a, self.b - z_plus)


@dataclass(frozen=True, eq=False)
class SpheroidProfile(SurfaceProfile):
    """Spheroid E(1,1,c): u(z) = √(1 − z²/c²) on [−c, c]."""

    c: float = 1.0
    exact = True

    def radius_sq(self, z, da, db):
        return np.asarray(da, dtype=float) * db / (self.c * self.c)

    def speed_sq(self, z, da, db):
        c2 = self.c * self.c
        z = np.asarray(z, dtype=float)
        return (c2 * c2 + (1.0 - c2) * z * z) / (c2 * da * db)

    def clairaut_gap(self, z, pair: TurningPair, dm, dp):
        # h·u² − j² = (h/c²)(z₊ − z)(z − z₋) since z₋ = −z₊
        return pair.h * np.asarray(dm, dtype=float) * dp / (self.c * self.c)

    def turning_points(self, h: float = 1.0, j: float = 0.0) -> TurningPair:
        limit = self._check_band(h, j)
        ratio = min(j * j / h, 1.0) if abs(j) < limit else 1.0
        root = math.sqrt(1.0 - ratio)
        z_plus = self.c * root
        gap = self.c * ratio / (1.0 + root)
        return TurningPair(-z_plus, z_plus, h, j, gap, gap)


@dataclass(frozen=True, eq=False)
class EggProfile(SurfaceProfile):
    """u(z) = √(1 − z²)·(1 + eps·z) on [−1, 1]: a single-equator, non-Zoll test surface."""

    eps: float = 0.0
    exact = True

    def radius_sq(self, z, da, db):
        z = np.asarray(z, dtype=float)
        return np.asarray(da, dtype=float) * db * (1.0 + self.eps * z) ** 2

    def speed_sq(self, z, da, db):
        z = np.asarray(z, dtype=float)
        r2 = np.asarray(da, dtype=float) * db
        numer = -z * (1.0 + self.eps * z) + self.eps * r2
        return (r2 + numer * numer) / r2

    def _pole_equation(self, h: float, j: float, side: float) -> Callable[[float], float]:
        # h·u² − j² as a function of the distance d to the pole at z = side
        eps = self.eps

        def phi(d: float) -> float:
            return h * d * (2.0 - d) * (1.0 + eps * (side - side * d)) ** 2 - j * j

        return phi

    def turning_points(self, h: float = 1.0, j: float = 0.0) -> TurningPair:
        """Turning points found as distances to the poles, so z∓ ± 1 keep all digits."""
        limit = self._check_band(h, j)
        if j == 0.0:
            return TurningPair(self.a, self.b, h, j, 0.0, 0.0)
        if abs(j) >= limit:
            return TurningPair(self.z0, self.z0, h, j, self.z0 - self.a, self.b - self.z0)
        below = self._pole_root(self._pole_equation(h, j, -1.0), self.z0 - self.a, h, j, 1.0 - self.eps)
        above = self._pole_root(self._pole_equation(h, j, 1.0), self.b - self.z0, h, j, 1.0 + self.eps)
        return TurningPair(self.a + below, self.b - above, h, j, below, above)

    @staticmethod
    def _pole_root(phi: Callable[[float], float], reach: float, h: float, j: float, factor: float) -> float:
        scale = min(j * j / (2.0 * h * factor * factor), reach)
        return find_root(phi, 0.0, reach, tol=1e-15 * scale)

    def clairaut_gap(self, z, pair: TurningPair, dm, dp):
        dm = np.asarray(dm, dtype=float)
        dp = np.asarray(dp, dtype=float)
        if pair.j == 0.0:
            return pair.h * self.radius_sq(z, pair.below + dm, pair.above + dp)
        # h(1 − z²)(1 + εz)² − j² = (z − z₋)(z − z₊)·r(z) with r quadratic
        eps, h = self.eps, pair.h
        quartic = [-h * eps * eps, -2.0 * h * eps, h * (eps * eps - 1.0), 2.0 * h * eps, h - pair.j ** 2]
        roots = [1.0, -(pair.z_minus + pair.z_plus), pair.z_minus * pair.z_plus]
        quotient, _ = np.polydiv(quartic, roots)
        return -dm * dp * np.polyval(quotient, np.asarray(z, dtype=float))


def spheroid_profile(c: float) -> SpheroidProfile:
    """Profile of the spheroid E(1,1,c); c = 1 is the round sphere."""
    if not c > 0:
        raise DomainError(f"spheroid parameter c must be positive, got {c}")
    c2 = c * c

    def u(z):
        return np.sqrt(np.maximum(1.0 - np.asarray(z, dtype=float) ** 2 / c2, 0.0))

    def du(z):
        return -np.asarray(z, dtype=float) / (c2 * u(z))

    def d2u(z):
        return -1.0 / (c2 * u(z) ** 3)

    label = "round" if c == 1.0 else f"spheroid:{c:g}"
    return SpheroidProfile(u=u, du=du, a=-c, b=c, z0=0.0, label=label, d2u=d2u, c=c)


def egg_profile(eps: float = 0.2) -> EggProfile:
    if not abs(eps) < 0.5:
        raise DomainError(f"egg profile needs |eps| < 1/2, got {eps}")

    def root(z):
        return np.sqrt(np.maximum(1.0 - np.asarray(z, dtype=float) ** 2, 0.0))

    def u(z):
        return root(z) * (1.0 + eps * np.asarray(z, dtype=float))

    def du(z):
        z = np.asarray(z, dtype=float)
        r = root(z)
        return -z / r * (1.0 + eps * z) + eps * r

    def d2u(z):
        z = np.asarray(z, dtype=float)
        r = root(z)
        return -(1.0 + eps * z) / r ** 3 - 2.0 * eps * z / r

    z0 = 0.0 if eps == 0 else (math.sqrt(1.0 + 8.0 * eps * eps) - 1.0) / (4.0 * eps)
    return EggProfile(u=u, du=du, a=-1.0, b=1.0, z0=z0, label=f"egg:{eps:g}", d2u=d2u, eps=eps)


def turning_points(p: SurfaceProfile, h: float, j: float) -> TurningPair:
    """Roots of u(z)²·h = j² bracketing the equator (closed form for spheroids)."""
    return p.turning_points(h, j)


def turning_points_generic(p: SurfaceProfile, h: float, j: float) -> TurningPair:
    return SurfaceProfile.turning_points(p, h, j)


def equator_length(p: SurfaceProfile) -> float:
    return 2.0 * math.pi * p.equator_radius


def validate_profile(p: SurfaceProfile, samples: int = 401) -> SurfaceProfile:
    """Check the single-equator assumption by sampling u and u′."""
    z = np.linspace(p.a, p.b, samples + 2)[1:-1]
    values = np.asarray(p.u(z), dtype=float)
    if np.any(values <= 0.0):
        raise DomainError(f"{p.label}: u must be positive inside (a, b)")
    ends = np.asarray(p.u(np.array([p.a, p.b])), dtype=float)
    if np.any(np.abs(ends) > 1e-12):
        raise DomainError(f"{p.label}: u must vanish at the poles")
    slopes = np.sign(np.asarray(p.du(z), dtype=float))
    slopes = slopes[slopes != 0]
    changes = int(np.count_nonzero(np.diff(slopes)))
    if changes != 1:
        raise DomainError(f"{p.label}: expected a single equator, u′ changes sign {changes} times")
    if values.max() > p.equator_radius * (1.0 + 1e-9):
        raise DomainError(f"{p.label}: z0 = {p.z0} is not the maximum of u")
    return p


def named_profile(name: str) -> SurfaceProfile:
    """Profiles known to the CLI: round, egg[:eps], spheroid:<c>."""
    key, _, arg = name.partition(":")
    try:
        if key == "round" and not arg:
            return spheroid_profile(1.0)
        if key == "egg":
            return egg_profile(float(arg) if arg else 0.2)
        if key == "spheroid" and arg:
            return spheroid_profile(float(arg))
    except ValueError as e:
        raise DomainError(f"bad profile argument in {name!r}: {e}") from e
    raise DomainError(f"unknown profile {name!r} (known: round, egg[:eps], spheroid:<c>)")
