"""Cogeodesic flow on a sphere of revolution, as an independent check of the actions.

In coordinates (z, θ, p_z, p_θ) the Hamiltonian is

    H = p_z²/(1 + u′²) + p_θ²/u²

and J = p_θ is conserved. Hamilton's equations give speed 2√H, so a unit
covector (H = 1) traces its geodesic at speed 2.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid

from .errors import BracketError, DomainError, NonClosureError, PoleApproachError, PoleError
from .numerics import find_root, integrate_sqrt_singular
from .surface import SurfaceProfile, spheroid_profile

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

# smallest radius u(z) a trajectory may reach
POLE_LIMIT = 1e-6
CSV_HEADER = "t,z,theta,p_z,p_theta,H,J"


@dataclass(frozen=True)
class PhaseState:
    z: float
    theta: float
    p_z: float
    p_theta: float

    def as_array(self) -> np.ndarray:
        return np.array([self.z, self.theta, self.p_z, self.p_theta], dtype=float)

    @classmethod
    def from_array(cls, row: Sequence[float]) -> "PhaseState":
        return cls(*(float(v) for v in row))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Fixed-step solution: ``states[k]`` = (z, θ, p_z, p_θ) at ``times[k]``; θ is unwrapped."""

    times: np.ndarray
    states: np.ndarray
    dt: float
    H: np.ndarray
    J: np.ndarray

    @property
    def length(self) -> float:
        """Arc length ∫ 2√H dt."""
        speed = 2.0 * np.sqrt(np.maximum(self.H, 0.0))
        return float(trapezoid(speed, self.times))

    @property
    def h_drift(self) -> float:
        return float(np.max(np.abs(self.H - self.H[0])))

    @property
    def j_drift(self) -> float:
        return float(np.max(np.abs(self.J - self.J[0])))

    @property
    def final(self) -> PhaseState:
        return PhaseState.from_array(self.states[-1])

    def phase_states(self) -> List[PhaseState]:
        return [PhaseState.from_array(row) for row in self.states]

    def turning_heights(self) -> Dict[str, np.ndarray]:
        """Local extrema of z(t), refined by the parabola through three samples."""
        z = self.states[:, 0]
        left, mid, right = z[:-2], z[1:-1], z[2:]
        curvature = right - 2.0 * mid + left
        with np.errstate(divide="ignore", invalid="ignore"):
            peak = mid - (right - left) ** 2 / (8.0 * curvature)
        peak = np.where(curvature != 0.0, peak, mid)
        maxima = (mid >= left) & (mid > right)
        minima = (mid <= left) & (mid < right)
        return {"max": peak[maxima], "min": peak[minima]}

    def equator_crossings(self, z0: float) -> np.ndarray:
        """Times where z − z0 changes sign, by linear interpolation within the step."""
        shifted = self.states[:, 0] - z0
        k = np.flatnonzero(np.sign(shifted[:-1]) * np.sign(shifted[1:]) < 0)
        frac = shifted[k] / (shifted[k] - shifted[k + 1])
        return self.times[k] + frac * self.dt

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for t, (z, theta, pz, pt), h, j in zip(self.times, self.states, self.H, self.J):
            lines.append(
                f"{t:.12g},{z:.12g},{math.fmod(theta, TWO_PI):.12g},{pz:.12g},{pt:.12g},{h:.12g},{j:.12g}"
            )
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ClosedGeodesic:
    c: float
    j: float
    length: float
    equator_crossings: int
    closure_gap: float
    radial_period: float

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)


# ---------------------------------------------------------------------------
# Hamiltonian and vector field
# ---------------------------------------------------------------------------

def _hamiltonian(p: SurfaceProfile, z, p_z, p_theta):
    da = z - p.a
    db = p.b - z
    return p_z ** 2 / p.speed_sq(z, da, db) + p_theta ** 2 / p.radius_sq(z, da, db)


def hamiltonian(p: SurfaceProfile, s: PhaseState) -> float:
    if not p.a < s.z < p.b:
        raise PoleError(f"{p.label}: z = {s.z} is not inside ({p.a}, {p.b})")
    return float(_hamiltonian(p, s.z, s.p_z, s.p_theta))


def angular_momentum(s: PhaseState) -> float:
    return s.p_theta


def launch_state(p: SurfaceProfile, z: float, p_theta: float, theta: float = 0.0, upward: bool = True) -> PhaseState:
    """State on H = 1 at height z with J = p_theta; p_z from the energy."""
    if not p.a < z < p.b:
        raise PoleError(f"{p.label}: z = {z} is not inside ({p.a}, {p.b})")
    da, db = z - p.a, p.b - z
    gap = 1.0 - p_theta ** 2 / float(p.radius_sq(z, da, db))
    if gap < 0.0:
        raise DomainError(f"|p_theta| = {abs(p_theta)} exceeds u(z) at z = {z}")
    p_z = math.sqrt(gap * float(p.speed_sq(z, da, db)))
    return PhaseState(z, theta, p_z if upward else -p_z, p_theta)


def _second_derivative(p: SurfaceProfile):
    if p.d2u is not None:
        return p.d2u
    logger.warning(f"⚠️ {p.label}: no u″ given, using central differences of u′")

    def d2u(z):
        step = 1e-6
        return (np.asarray(p.du(z + step)) - np.asarray(p.du(z - step))) / (2.0 * step)

    return d2u


def _vector_field(p: SurfaceProfile):
    d2u = _second_derivative(p)

    def rhs(y: np.ndarray) -> np.ndarray:
        z, p_z, p_theta = y[:, 0], y[:, 2], y[:, 3]
        u = np.asarray(p.u(z), dtype=float)
        if np.any(u < POLE_LIMIT):
            raise PoleApproachError(f"{p.label}: trajectory reached u(z) < {POLE_LIMIT:g}")
        du = np.asarray(p.du(z), dtype=float)
        speed = 1.0 + du * du
        out = np.empty_like(y)
        out[:, 0] = 2.0 * p_z / speed
        out[:, 1] = 2.0 * p_theta / (u * u)
        out[:, 2] = 2.0 * p_z ** 2 * du * np.asarray(d2u(z), dtype=float) / speed ** 2 \
            + 2.0 * p_theta ** 2 * du / u ** 3
        out[:, 3] = 0.0
        return out

    return rhs


def _integrate(p: SurfaceProfile, y0: np.ndarray, steps: int, dt: float) -> np.ndarray:
    """Classical RK4 over a batch of states; returns shape (steps + 1, batch, 4)."""
    rhs = _vector_field(p)
    out = np.empty((steps + 1,) + y0.shape)
    out[0] = y = y0
    for n in range(1, steps + 1):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * dt * k1)
        k3 = rhs(y + 0.5 * dt * k2)
        k4 = rhs(y + dt * k3)
        y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[n] = y
    return out


def flow_batch(p: SurfaceProfile, states: Sequence[PhaseState], t_max: float, dt: float) -> List[Trajectory]:
    """Integrate several initial conditions together with one vectorised RK4 loop."""
    if not t_max > 0 or not dt > 0:
        raise DomainError(f"t_max and dt must be positive, got {t_max}, {dt}")
    if not states:
        return []
    for s in states:
        h = hamiltonian(p, s)
        if not 0.0 < h <= 1.0 + 1e-12:
            raise DomainError(f"initial energy must lie in (0, 1], got {h}")
    steps = int(math.ceil(t_max / dt - 1e-9))
    y0 = np.array([s.as_array() for s in states])
    path = _integrate(p, y0, steps, dt)
    times = dt * np.arange(steps + 1)
    logger.debug(f"🔍 {p.label}: {len(states)} trajectories, {steps} RK4 steps of {dt:g}")

    result = []
    for k in range(len(states)):
        track = path[:, k, :]
        energy = _hamiltonian(p, track[:, 0], track[:, 2], track[:, 3])
        result.append(Trajectory(times=times, states=track, dt=dt, H=energy, J=track[:, 3].copy()))
    return result


def flow(p: SurfaceProfile, s0: PhaseState, t_max: float, dt: float) -> Trajectory:
    return flow_batch(p, [s0], t_max, dt)[0]


# ---------------------------------------------------------------------------
# quadratures along the orbit
# ---------------------------------------------------------------------------

def meridian_length(p: SurfaceProfile, tol: Optional[float] = None) -> float:
    """2∫ₐᵇ √(1 + u′²) dz."""

    def integrand(z, da, db):
        value = np.sqrt(p.speed_sq(z, da, db))
        if not p.exact:
            value = np.where(np.isfinite(value), value, 0.0)
        return value

    return 2.0 * integrate_sqrt_singular(integrand, p.a, p.b, tol, offsets=True)


def _oscillation_pair(p: SurfaceProfile, j: float, allow_zero: bool):
    limit = p.equator_radius
    if abs(j) >= limit or (j == 0.0 and not allow_zero):
        raise DomainError(f"need 0 < |j| < u(z0) = {limit}, got {j}")
    return p.turning_points(1.0, abs(j))


def radial_period(p: SurfaceProfile, j: float, tol: Optional[float] = None) -> float:
    """Time of one full oscillation z₊ → z₋ → z₊ at H = 1: ∫ √(1+u′²)/√(1 − j²/u²) dz."""
    pair = _oscillation_pair(p, j, allow_zero=True)

    def integrand(z, dm, dp):
        da, db = pair.below + dm, pair.above + dp
        speed = p.speed_sq(z, da, db)
        if j == 0.0:
            value = np.sqrt(speed)
        else:
            value = np.sqrt(speed * p.radius_sq(z, da, db) / np.maximum(p.clairaut_gap(z, pair, dm, dp), 0.0))
        if not p.exact:
            value = np.where(np.isfinite(value), value, 0.0)
        return value

    return integrate_sqrt_singular(integrand, pair.z_minus, pair.z_plus, tol, offsets=True)


def first_return_angle(p: SurfaceProfile, j: float, tol: Optional[float] = None) -> float:
    """Δθ over one full radial oscillation: 2∫ j√(1+u′²)/(u√(u² − j²)) dz."""
    pair = _oscillation_pair(p, j, allow_zero=False)

    def integrand(z, dm, dp):
        da, db = pair.below + dm, pair.above + dp
        gap = np.maximum(p.clairaut_gap(z, pair, dm, dp), 0.0)
        return abs(j) * np.sqrt(p.speed_sq(z, da, db) / (p.radius_sq(z, da, db) * gap))

    return 2.0 * math.copysign(integrate_sqrt_singular(integrand, pair.z_minus, pair.z_plus, tol, offsets=True), j)


def first_return_angle_ode(p: SurfaceProfile, j: float, steps: int = 4000) -> float:
    """The same angle read off the flow after one radial period."""
    pair = _oscillation_pair(p, j, allow_zero=False)
    period = radial_period(p, j)
    start = np.array([[pair.z_plus, 0.0, 0.0, j]])
    path = _integrate(p, start, steps, period / steps)
    return float(path[-1, 0, 1])


# ---------------------------------------------------------------------------
# the α(c) geodesic
# ---------------------------------------------------------------------------

def _shoot(p: SurfaceProfile, j: float, steps_per_period: int):
    period = radial_period(p, j)
    pair = p.turning_points(1.0, j)
    s0 = PhaseState(pair.z_plus, 0.0, 0.0, j)
    dt = period / steps_per_period
    path = _integrate(p, s0.as_array()[None, :], 2 * steps_per_period, dt)[:, 0, :]
    times = dt * np.arange(path.shape[0])
    energy = _hamiltonian(p, path[:, 0], path[:, 2], path[:, 3])
    track = Trajectory(times=times, states=path, dt=dt, H=energy, J=path[:, 3].copy())

    end = path[-1] - path[0]
    turn = math.remainder(end[1] - TWO_PI, TWO_PI)
    gap = math.sqrt(end[0] ** 2 + turn ** 2 + end[2] ** 2 + end[3] ** 2)
    return track, period, gap


def closed_geodesic_alpha(c: float, steps_per_period: int = 4000) -> ClosedGeodesic:
    """Shoot the simple closed geodesic with J = j₀(c) that meets the equator 4 times."""
    from .spheroid_widths import j0

    if not 0.0 < c < 0.5:
        raise DomainError(f"the α geodesic only exists for 0 < c < 1/2, got {c}")
    p = spheroid_profile(c)
    j = j0(c)
    track, period, gap = _shoot(p, j, steps_per_period)

    if gap > 1e-6:
        logger.warning(f"⚠️ closure gap {gap:.3e} at j0 = {j:.12g}, refining j")
        lo, hi = max(j - 1e-3, 1e-9), min(j + 1e-3, 1.0 - 1e-9)
        try:
            j = find_root(lambda jj: first_return_angle(p, jj) - math.pi, lo, hi)
        except BracketError as e:
            raise NonClosureError(
                f"α geodesic for c = {c} does not close: gap {gap:.3e}, no bracket for j ({e})"
            ) from e
        track, period, gap = _shoot(p, j, 2 * steps_per_period)
    if gap > 1e-4:
        raise NonClosureError(f"α geodesic for c = {c} does not close: gap {gap:.3e}")

    crossings = len(track.equator_crossings(p.z0))
    logger.info(f"✅ α geodesic c = {c:g}: length {track.length:.12g}, {crossings} equator crossings")
    return ClosedGeodesic(
        c=c,
        j=j,
        length=track.length,
        equator_crossings=crossings,
        closure_gap=gap,
        radial_period=period,
    )
