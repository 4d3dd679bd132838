"""Closed forms for the spheroids E(1,1,c).

For 0 ≤ j ≤ 1 the radial action of the spheroid is

    g_c(j) = −4j²cK(k) + 4cE(k) + (4j²/c)Π(n_c, k) − 2πj,
    k = k_c(j) = (c² − 1)(1 − j²)/c²,   n_c = (c² − 1)/c²,

which is the form without the indeterminate characteristic 1 − j² at j = 0.
The Gromov width of D*E(1,1,c) is

    α(c)  for c < 1/2,   2π  for 1/2 ≤ c ≤ 1,
    β(c)  for 1 < c < c₀, 4π  for c ≥ c₀,

with β(c) = 4E(1 − c²) the meridian length, c₀ the root of β = 4π, and
α(c) = 2g_c(j₀) + 2πj₀ = 8cE(k_c(j₀)) where g′_c(j₀) = −π.
"""

from __future__ import annotations

import logging
import math
import threading
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np

from .action_profile import ToricProfile, chebyshev_grid
from .config import get_settings
from .errors import DomainError
from .numerics import ellip_E, ellip_K, ellip_Pi, find_root, integrate_sqrt_singular

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi


class Regime(str, Enum):
    OBLATE_STEEP = "oblate_steep"
    MIDDLE = "middle"
    PROLATE = "prolate"
    PROLATE_CAPPED = "prolate_capped"


@dataclass(frozen=True)
class WidthReport:
    c: float
    regime: Regime
    j0: Optional[float]
    alpha: Optional[float]
    beta: float
    width: float
    c1: Optional[float]
    c3: Optional[float]

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data["regime"] = self.regime.value
        return data


def _check(c: float, j: Optional[float] = None) -> None:
    if not c > 0:
        raise DomainError(f"spheroid parameter c must be positive, got {c}")
    if j is not None and not 0.0 <= j <= 1.0:
        raise DomainError(f"j must lie in [0, 1], got {j}")


def k_mod(c: float, j: float) -> float:
    return (c * c - 1.0) * (1.0 - j * j) / (c * c)


def n_char(c: float) -> float:
    return (c * c - 1.0) / (c * c)


def g(c: float, j: float, tol: Optional[float] = None) -> float:
    """g_c(j) from K, E and Π(n_c, k_c(j))."""
    _check(c, j)
    if j == 1.0:
        return 0.0
    k = k_mod(c, j)
    j2 = j * j
    value = 4.0 * c * ellip_E(k, tol) - TWO_PI * j
    if j2 > 0.0:
        value += -4.0 * j2 * c * ellip_K(k, tol) + 4.0 * j2 / c * ellip_Pi(n_char(c), k, tol)
    return value


def g_quad(c: float, j: float, tol: Optional[float] = None) -> float:
    """g_c(j) = 4∫₀^{c√(1−j²)} √((c²(1−j²) − z²)(c⁴ + (1−c²)z²)) / (c(c² − z²)) dz."""
    _check(c, j)
    if j == 1.0:
        return 0.0
    root = math.sqrt(1.0 - j * j)
    z_plus = c * root
    pole_gap = c * j * j / (1.0 + root)
    c2 = c * c

    def integrand(z, dz, dp):
        quartic = c2 * c2 + (1.0 - c2) * z * z
        return np.sqrt(dp * (z_plus + z) * quartic) / (c * (pole_gap + dp) * (c + z))

    tol = get_settings().quad_tol if tol is None else tol
    return 4.0 * integrate_sqrt_singular(integrand, 0.0, z_plus, 0.25 * tol, offsets=True)


def g_quad_r(c: float, j: float, tol: Optional[float] = None) -> float:
    """g_c(j) after the substitution r = √((c − z)/(c + z)).

    The integrand depends on c only through r⁴ + (4c² − 2)r² + 1, which is
    increasing in c; hence g_c(j) is increasing in c.
    """
    _check(c, j)
    if j == 1.0:
        return 0.0
    root = math.sqrt(1.0 - j * j)
    r_min = j / (1.0 + root)
    shape = 4.0 * c * c - 2.0

    def integrand(r, d_lo, d_hi):
        r2 = r * r
        quartic = r2 * r2 + shape * r2 + 1.0
        # 4r² − j²(1+r²)² = j(r − r_min)(r_max − r)·(2r + j(1+r²))
        if j == 0.0:
            return 8.0 * np.sqrt(quartic) / (1.0 + r2) ** 2
        radial = d_lo * ((1.0 + root) - j * r) * (2.0 * r + j * (1.0 + r2))
        return 4.0 * np.sqrt(radial * quartic) / (r * (1.0 + r2) ** 2)

    tol = get_settings().quad_tol if tol is None else tol
    return integrate_sqrt_singular(integrand, r_min, 1.0, 0.25 * tol, offsets=True)


def g_d1(c: float, j: float, tol: Optional[float] = None) -> float:
    """g′_c(j) = −4jcK(k) + (4j/c)Π(n_c, k) − 2π; −2π at j = 0, −2πc at j = 1."""
    _check(c, j)
    if j == 0.0:
        return -TWO_PI
    if j == 1.0:
        return -TWO_PI * c
    k = k_mod(c, j)
    return -4.0 * j * c * ellip_K(k, tol) + 4.0 * j / c * ellip_Pi(n_char(c), k, tol) - TWO_PI


def g_d1_direct(c: float, j: float, tol: Optional[float] = None) -> float:
    """g′_c(j) = −(4j/c)((c² − 1)K(k) + Π(1 − j², k)) for 0 < j < 1."""
    _check(c, j)
    if not 0.0 < j < 1.0:
        raise DomainError("the Π(1 − j², k) form of g′ needs 0 < j < 1")
    k = k_mod(c, j)
    return -4.0 * j / c * ((c * c - 1.0) * ellip_K(k, tol) + ellip_Pi(1.0 - j * j, k, tol))


def g_d2(c: float, j: float, tol: Optional[float] = None) -> float:
    """g″_c(j) = −(4c/(1 − j²))(K(k) − E(k)); positive for c < 1, negative for c > 1."""
    _check(c, j)
    if j == 1.0:
        raise DomainError("g″ is not defined at j = 1")
    k = k_mod(c, j)
    return -4.0 * c / (1.0 - j * j) * (ellip_K(k, tol) - ellip_E(k, tol))


def j0_equation_lhs(c: float, j: float, tol: Optional[float] = None) -> float:
    """−jcK(k) + (j/c)Π(n_c, k); equals π/4 exactly at j = j₀(c)."""
    _check(c, j)
    k = k_mod(c, j)
    return -j * c * ellip_K(k, tol) + j / c * ellip_Pi(n_char(c), k, tol)


def j0(c: float, tol: Optional[float] = None) -> float:
    """Unique j ∈ [0, 1] with g′_c(j) = −π, for 0 < c < 1/2."""
    _check(c)
    if c >= 0.5:
        raise DomainError(f"j0 exists only for c < 1/2, got {c}")
    # g′_c + π runs from −π at j = 0 to π(1 − 2c) > 0 at j = 1, increasing
    return find_root(lambda jj: g_d1(c, jj) + math.pi, 0.0, 1.0, tol)


def alpha(c: float) -> float:
    """α(c) = 8cE(k_c(j₀(c))), the length of the simple geodesic crossing the equator 4 times."""
    _check(c)
    if c >= 0.5:
        raise DomainError(f"alpha is defined for c < 1/2, got {c}")
    return 8.0 * c * ellip_E(k_mod(c, j0(c)))


def beta(c: float) -> float:
    """β(c) = 4E(1 − c²), the meridian length."""
    _check(c)
    return 4.0 * ellip_E(1.0 - c * c)


_c0_lock = threading.Lock()
_c0_value: Optional[float] = None


def _solve_c0(tol: Optional[float]) -> float:
    return find_root(lambda x: beta(x) - FOUR_PI, 2.0, 3.0, tol)


def c0(tol: Optional[float] = None) -> float:
    """Root of β(c) = 4π in [2, 3]; the default-tolerance value is computed once."""
    global _c0_value
    if tol is not None:
        return _solve_c0(tol)
    if _c0_value is None:
        with _c0_lock:
            if _c0_value is None:
                _c0_value = _solve_c0(None)
                logger.info(f"✅ c0 = {_c0_value:.15g}")
    return _c0_value


def regime(c: float) -> Regime:
    _check(c)
    if c < 0.5:
        return Regime.OBLATE_STEEP
    if c <= 1.0:
        return Regime.MIDDLE
    if c < c0():
        return Regime.PROLATE
    return Regime.PROLATE_CAPPED


def gromov_width(c: float) -> float:
    """w(c) alone, without the capacity fields of WidthReport."""
    kind = regime(c)
    if kind is Regime.OBLATE_STEEP:
        return alpha(c)
    if kind is Regime.MIDDLE:
        return TWO_PI
    if kind is Regime.PROLATE:
        return beta(c)
    return FOUR_PI


def width(c: float) -> WidthReport:
    """Gromov width of D*E(1,1,c) with the regime data and capacities c₁, c₃."""
    from .ech import spheroid_capacity

    kind = regime(c)
    root = j0(c) if kind is Regime.OBLATE_STEEP else None
    a = 8.0 * c * ellip_E(k_mod(c, root)) if root is not None else None
    b = beta(c)
    if kind is Regime.OBLATE_STEEP:
        w = a
    elif kind is Regime.MIDDLE:
        w = TWO_PI
    elif kind is Regime.PROLATE:
        w = b
    else:
        w = FOUR_PI
    c1 = spheroid_capacity(c, 1) if c >= 1.0 else None
    c3 = spheroid_capacity(c, 3) if kind is not Regime.PROLATE_CAPPED else None
    return WidthReport(c=c, regime=kind, j0=root, alpha=a, beta=b, width=w, c1=c1, c3=c3)


def rho(c: float, j: float) -> Tuple[float, float]:
    """Boundary point of Ω_c: (g, g + 2πj) for j ≥ 0 and (g − 2πj, g) for j < 0."""
    _check(c)
    if not -1.0 <= j <= 1.0:
        raise DomainError(f"j must lie in [-1, 1], got {j}")
    value = g(c, abs(j))
    if j >= 0:
        return value, value + TWO_PI * j
    return value - TWO_PI * j, value


def spheroid_toric_profile(c: float, n_samples: Optional[int] = None) -> ToricProfile:
    """Ω_c sampled from the closed form on the Chebyshev grid."""
    _check(c)
    n_samples = get_settings().samples if n_samples is None else n_samples
    if n_samples < 16:
        raise DomainError(f"need at least 16 samples, got {n_samples}")
    grid = chebyshev_grid(1.0, n_samples)
    half = grid[grid >= 0.0]
    values = np.array([g(c, float(jj)) for jj in half])
    action = np.concatenate([values[:0:-1], values])
    return ToricProfile(
        j=grid,
        rho1=action + np.where(grid < 0, -TWO_PI * grid, 0.0),
        rho2=action + np.where(grid > 0, TWO_PI * grid, 0.0),
        equator_length=TWO_PI,
        meridian_length=float(values[0]),
        source=c,
        evaluator=lambda jj: rho(c, min(max(jj, -1.0), 1.0)),
    )


def endpoint_slopes(c: float) -> Dict[str, float]:
    """Tangent slopes of ∂Ω_c where it meets the axes.

    ``top``: slope at (0, 2π) on the j ≥ 0 branch, (c − 1)/c.
    ``bottom``: slope at (2π, 0) on the j ≤ 0 branch, c/(c − 1) (infinite for c = 1).
    """
    _check(c)
    bottom = math.inf if c == 1.0 else c / (c - 1.0)
    return {"top": (c - 1.0) / c, "bottom": bottom}


@dataclass(frozen=True)
class CandidateOrdering:
    """Actions of the two orbit sets competing for c₃ when 1/3 ≤ c < 1/2."""

    c: float
    two_alpha: float
    two_pi_plus_beta: float

    @property
    def gap(self) -> float:
        return self.two_alpha - self.two_pi_plus_beta

    @property
    def smaller(self) -> str:
        return "γe·γ̄e" if self.gap <= 0.0 else "γ1·meridian"

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data.update(gap=self.gap, smaller=self.smaller)
        return data


def candidate_ordering(c: float) -> CandidateOrdering:
    """Compare 2α(c) with 2π + β(c), the two low-action c₃ candidates on [1/3, 1/2)."""
    _check(c)
    if not 1.0 / 3.0 <= c < 0.5:
        raise DomainError(f"candidate ordering is defined for 1/3 ≤ c < 1/2, got {c}")
    ordering = CandidateOrdering(c, 2.0 * alpha(c), TWO_PI + beta(c))
    logger.debug(f"🔍 c = {c:g}: 2α − 2π − β = {ordering.gap:.6g}")
    return ordering


def spheroid_surface_area(c: float) -> float:
    """Area of E(1,1,c) (oblate, round and prolate closed forms)."""
    _check(c)
    if c == 1.0:
        return 4.0 * math.pi
    if c < 1.0:
        e = math.sqrt(1.0 - c * c)
        return TWO_PI * (1.0 + c * c / e * math.atanh(e))
    e = math.sqrt(1.0 - 1.0 / (c * c))
    return TWO_PI * (1.0 + c * math.asin(e) / e)
