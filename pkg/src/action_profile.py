"""Toric-domain image Ω of the disk cotangent bundle of a sphere of revolution.

The boundary of Ω is parametrised by the angular momentum j ∈ [−u(z0), u(z0)]:

    ρ(j) = (I₂(j) + Θ₁(j), I₂(j) + Θ₂(j)),

where I₂ is the radial action at energy 1 and Θ_i is the 2πj correction on one
side of the diagonal. The curve runs from (2πu(z0), 0) through (L, L) to
(0, 2πu(z0)), L being the meridian length.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .config import get_settings
from .errors import DomainError, IndeterminateError
from .numerics import integrate_sqrt_singular
from .surface import SurfaceProfile, equator_length, validate_profile

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


class DomainClass(str, Enum):
    CONCAVE = "concave"
    WEAKLY_CONVEX = "weakly_convex"
    NEITHER = "neither"


@dataclass(frozen=True, eq=False)
class ToricProfile:
    """Sampled boundary curve of Ω with its scalar summaries.

    ``j`` is ascending, so the samples run from the x-axis end to the y-axis end.
    ``evaluator`` (optional) returns ρ(j) exactly and is used for local refinement.
    """

    j: np.ndarray
    rho1: np.ndarray
    rho2: np.ndarray
    equator_length: float
    meridian_length: float
    source: Union[SurfaceProfile, float, None] = None
    evaluator: Optional[Callable[[float], Tuple[float, float]]] = None

    def __post_init__(self) -> None:
        if not (len(self.j) == len(self.rho1) == len(self.rho2)):
            raise DomainError("toric profile arrays must have equal length")
        if len(self.j) < 3 or np.any(np.diff(self.j) <= 0):
            raise DomainError("toric profile needs at least 3 samples with increasing j")

    @property
    def samples(self) -> List[Tuple[float, float, float]]:
        return list(zip(self.j.tolist(), self.rho1.tolist(), self.rho2.tolist()))

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.rho1, self.rho2])

    @property
    def corner_index(self) -> int:
        return int(np.argmin(np.abs(self.j)))

    def to_csv(self) -> str:
        lines = ["j,rho1,rho2"]
        lines += [f"{a:.12g},{b:.12g},{c:.12g}" for a, b, c in self.samples]
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# action integrals
# ---------------------------------------------------------------------------

def action_I2(p: SurfaceProfile, h: float, j: float, tol: Optional[float] = None) -> float:
    """Radial action 2∫_{z₋}^{z₊} √((h − j²/u²)(1 + u′²)) dz."""
    limit = p._check_band(h, j)
    if abs(j) >= limit:
        return 0.0
    pair = p.turning_points(h, j)
    if tol is None:
        tol = get_settings().quad_tol

    def integrand(z, dm, dp):
        da = pair.below + dm
        db = pair.above + dp
        gap = np.maximum(p.clairaut_gap(z, pair, dm, dp), 0.0)
        value = np.sqrt(gap * p.speed_sq(z, da, db) / p.radius_sq(z, da, db))
        if not p.exact:
            # nodes rounding onto a pole carry negligible weight
            value = np.where(np.isfinite(value), value, 0.0)
        return value

    return 2.0 * integrate_sqrt_singular(integrand, pair.z_minus, pair.z_plus, 0.5 * tol, offsets=True)


def theta_correction(i: int, j: float) -> float:
    """Θ_i(j): 2πj on the j > 0 side for i = 2, −2πj on the j < 0 side for i = 1."""
    if i not in (1, 2):
        raise DomainError(f"theta index must be 1 or 2, got {i}")
    if i == 2 and j > 0:
        return TWO_PI * j
    if i == 1 and j < 0:
        return -TWO_PI * j
    return 0.0


def rho_from_action(action: float, j: float) -> Tuple[float, float]:
    return action + theta_correction(1, j), action + theta_correction(2, j)


def chebyshev_grid(u0: float, n_samples: int) -> np.ndarray:
    """Chebyshev–Lobatto nodes on [−u0, u0]; odd count so that j = 0 is a node."""
    n = n_samples | 1
    half = (n - 1) // 2
    k = np.arange(half)
    positive = u0 * np.cos(0.5 * math.pi * k / half)
    positive[0] = u0
    return np.concatenate([-positive, [0.0], positive[::-1]])


def boundary_curve(
    p: SurfaceProfile,
    n_samples: Optional[int] = None,
    tol: Optional[float] = None,
    workers: Optional[int] = None,
) -> ToricProfile:
    """Sample ∂Ω by quadrature of the radial action on a Chebyshev grid."""
    settings = get_settings()
    n_samples = settings.samples if n_samples is None else n_samples
    if n_samples < 16:
        raise DomainError(f"boundary_curve needs at least 16 samples, got {n_samples}")
    validate_profile(p)
    tol = 0.01 * settings.quad_tol if tol is None else tol
    workers = settings.workers if workers is None else workers

    u0 = p.equator_radius
    grid = chebyshev_grid(u0, n_samples)
    half = grid[grid >= 0.0]

    def evaluate(jj: float) -> float:
        return action_I2(p, 1.0, float(jj), tol)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            actions = list(pool.map(evaluate, half))
    else:
        actions = [evaluate(jj) for jj in half]
    logger.debug(f"🔍 {p.label}: {len(half)} radial actions evaluated")

    # I₂ depends on j² only; mirror the j ≥ 0 half
    positive_actions = np.asarray(actions)
    action = np.concatenate([positive_actions[:0:-1], positive_actions])
    theta1 = np.where(grid < 0, -TWO_PI * grid, 0.0)
    theta2 = np.where(grid > 0, TWO_PI * grid, 0.0)

    def evaluator(jj: float) -> Tuple[float, float]:
        return rho_from_action(action_I2(p, 1.0, abs(jj), tol), jj)

    return ToricProfile(
        j=grid,
        rho1=action + theta1,
        rho2=action + theta2,
        equator_length=equator_length(p),
        meridian_length=float(positive_actions[0]),
        source=p,
        evaluator=evaluator,
    )


# ---------------------------------------------------------------------------
# shape summaries
# ---------------------------------------------------------------------------

def zoll_defect(t: ToricProfile) -> float:
    """Sup-deviation of the j ≥ 0 branch from the affine Zoll profile ℓ − 2πj·ℓ/E."""
    mask = t.j >= 0
    ell = t.meridian_length
    line = ell - TWO_PI * t.j[mask] * (ell / t.equator_length)
    return float(np.max(np.abs(t.rho1[mask] - line)))


def is_zoll(t: ToricProfile, tol: float = 1e-8) -> bool:
    return zoll_defect(t) < tol


def turning_sines(t: ToricProfile) -> np.ndarray:
    """Sine of the turning angle at each interior sample (positive = left turn)."""
    d = np.diff(t.points, axis=0)
    lengths = np.hypot(d[:, 0], d[:, 1])
    cross = d[:-1, 0] * d[1:, 1] - d[:-1, 1] * d[1:, 0]
    return cross / (lengths[:-1] * lengths[1:])


def classify(t: ToricProfile, tol: Optional[float] = None) -> DomainClass:
    """Concave / weakly convex / neither, from discrete turning of the boundary."""
    tol = get_settings().classify_tol if tol is None else tol
    sines = turning_sines(t)
    corner = t.corner_index
    corner_sine = sines[corner - 1]
    branch = np.delete(sines, corner - 1)
    left = branch > tol
    right = branch < -tol
    if left.any() and right.any():
        raise IndeterminateError(
            f"boundary curvature changes sign: {int(left.sum())} left and {int(right.sum())} right turns"
        )

    # one-sided slope ρ₂′/ρ₁′ just after the corner on the j ≥ 0 branch
    dx = t.rho1[corner + 1] - t.rho1[corner]
    dy = t.rho2[corner + 1] - t.rho2[corner]
    corner_slope = dy / dx if dx != 0 else -math.inf

    if not right.any() and corner_sine >= -tol and corner_slope >= -1.0 - tol:
        result = DomainClass.WEAKLY_CONVEX
    elif not left.any() and corner_sine <= tol:
        result = DomainClass.CONCAVE
    else:
        result = DomainClass.NEITHER
    logger.debug(f"🔍 classify: corner turn {corner_sine:.3e}, slope {corner_slope:.3e} → {result.value}")
    return result


def max_inscribed_triangle(t: ToricProfile) -> float:
    """Largest m with △(m) ⊂ Ω: minimum of ρ₁ + ρ₂ along the boundary."""
    total = t.rho1 + t.rho2
    k = int(np.argmin(total))
    best = float(total[k])
    if 0 < k < len(total) - 1 and t.evaluator is not None:
        lo, hi = float(t.j[k - 1]), float(t.j[k + 1])
        found = minimize_scalar(
            lambda jj: sum(t.evaluator(jj)),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-12},
        )
        if found.success and found.fun < best:
            best = float(found.fun)
    return best


def mean_width_bound(t: ToricProfile) -> float:
    """min(equator length, meridian length): the triangle bound for convex or concave f."""
    return min(t.equator_length, t.meridian_length)


def profile_area(t: ToricProfile) -> float:
    """Area of Ω: shoelace sum over the origin and the boundary samples."""
    x = np.concatenate([[0.0], t.rho1])
    y = np.concatenate([[0.0], t.rho2])
    return float(0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))
