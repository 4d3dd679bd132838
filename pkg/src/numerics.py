"""Numerical kernels: complete elliptic integrals, tanh-sinh quadrature, root finding.

Elliptic integrals use the *parameter* convention

    K(k)    = ∫₀^{π/2} dθ / √(1 − k sin²θ)
    E(k)    = ∫₀^{π/2} √(1 − k sin²θ) dθ
    Π(n, k) = ∫₀^{π/2} dθ / ((1 − n sin²θ) √(1 − k sin²θ))

with k < 1 and n < 1, both possibly negative. They are evaluated with the same
double-exponential quadrature that serves the action integrals; the AGM path for
K and E is an optional shortcut.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .config import get_settings
from .errors import BracketError, DomainError, NumericalError, QuadratureError

logger = logging.getLogger(__name__)

HALF_PI = 0.5 * math.pi

# Nodes beyond |t| = 4 carry weights below 1e-36 of the total.
_T_MAX = 4.0
_MIN_LEVELS = 3
_MAX_LEVELS = 13


@dataclass(frozen=True)
class EllipticParam:
    """Arguments of the complete elliptic integrals (parameter convention, m = k)."""

    k: float
    n: float = 0.0

    def __post_init__(self) -> None:
        if not self.k < 1.0:
            raise DomainError(f"elliptic parameter k must be < 1, got {self.k}")
        if not self.n < 1.0:
            raise DomainError(f"elliptic characteristic n must be < 1, got {self.n}")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    levels: int
    evaluations: int


@dataclass(frozen=True)
class RootResult:
    """Outcome of a bracketed root search."""

    root: float
    iterations: int
    function_calls: int
    bracket_width: float
    method: str


# ---------------------------------------------------------------------------
# tanh-sinh quadrature
# ---------------------------------------------------------------------------

def _level_nodes(level: int) -> np.ndarray:
    h = 2.0 ** (-level)
    count = int(math.ceil(_T_MAX / h))
    k = np.arange(-count, count + 1)
    if level > 0:
        k = k[k % 2 != 0]
    return k * h


def _evaluate(f: Callable, args: tuple, shape: tuple) -> np.ndarray:
    try:
        values = np.asarray(f(*args), dtype=float)
    except (TypeError, ValueError):
        values = None
    if values is None or (values.shape != shape and values.shape != ()):
        values = np.array([float(f(*row)) for row in zip(*args)], dtype=float)
    return np.broadcast_to(values, shape).astype(float, copy=True)


def _tanh_sinh_sum(f: Callable, a: float, b: float, t: np.ndarray, offsets: bool) -> float:
    length = b - a
    s = HALF_PI * np.sinh(t)
    e = np.exp(-2.0 * np.abs(s))
    near = length * e / (1.0 + e)
    far = length / (1.0 + e)
    left = t < 0
    da = np.where(left, near, far)
    db = np.where(left, far, near)
    x = np.where(left, a + da, b - db)
    weights = length * math.pi * np.cosh(t) * e / (1.0 + e) ** 2
    if offsets:
        values = _evaluate(f, (x, da, db), x.shape)
    else:
        values = _evaluate(f, (x,), x.shape)
        # nodes that round onto an endpoint carry no weight
        values[(x <= a) | (x >= b)] = 0.0
    if not np.all(np.isfinite(values)):
        raise QuadratureError("integrand is not finite at interior quadrature nodes")
    return float(np.dot(weights, values))


def integrate_sqrt_singular_result(
    f: Callable,
    a: float,
    b: float,
    tol: Optional[float] = None,
    *,
    rel_tol: float = 0.0,
    offsets: bool = False,
) -> QuadratureResult:
    """Tanh-sinh quadrature of f over [a, b] with halving step size.

    With ``offsets=True`` the integrand is called as ``f(x, x - a, b - x)`` where
    the two distances are exact, so integrands blowing up like an inverse square
    root at an endpoint can be written without cancellation.
    """
    if tol is None:
        tol = get_settings().quad_tol
    if not a <= b:
        raise DomainError(f"integration bounds must satisfy a <= b, got [{a}, {b}]")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0, 0)

    total = 0.0
    evaluations = 0
    previous = None
    error = math.inf
    for level in range(_MAX_LEVELS + 1):
        t = _level_nodes(level)
        total += _tanh_sinh_sum(f, a, b, t, offsets)
        evaluations += t.size
        estimate = total * 2.0 ** (-level)
        if previous is not None:
            error = abs(estimate - previous)
            if level >= _MIN_LEVELS and error <= max(tol, rel_tol * abs(estimate)):
                return QuadratureResult(estimate, error, level, evaluations)
        previous = estimate
    raise QuadratureError(
        f"tanh-sinh did not converge on [{a}, {b}]: error estimate {error:.3e} > {tol:.3e}"
    )


def integrate_sqrt_singular(
    f: Callable,
    a: float,
    b: float,
    tol: Optional[float] = None,
    *,
    offsets: bool = False,
) -> float:
    """∫ₐᵇ f to absolute accuracy ``tol`` (default from settings, 1e-10)."""
    return integrate_sqrt_singular_result(f, a, b, tol, offsets=offsets).value


# ---------------------------------------------------------------------------
# complete elliptic integrals
# ---------------------------------------------------------------------------

def _special_quad(integrand: Callable[[np.ndarray], np.ndarray], tol: Optional[float]) -> float:
    rel = get_settings().special_tol if tol is None else tol
    return integrate_sqrt_singular_result(integrand, 0.0, HALF_PI, tol=0.0, rel_tol=rel).value


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two non-negative numbers."""
    if a < 0 or b < 0:
        raise DomainError("agm needs non-negative arguments")
    for _ in range(64):
        if abs(a - b) <= 1e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return a


def _ellip_agm(k: float) -> tuple:
    a, b = 1.0, math.sqrt(1.0 - k)
    total = 0.5 * k
    power = 1.0
    for _ in range(64):
        c = 0.5 * (a - b)
        if abs(c) <= 1e-17 * a:
            break
        total += power * c * c
        power *= 2.0
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    big_k = HALF_PI / a
    return big_k, big_k * (1.0 - total)


def ellip_K(k: float, tol: Optional[float] = None, method: str = "quad") -> float:
    """Complete elliptic integral of the first kind, K(k), k < 1."""
    param = EllipticParam(k)
    if param.k == 0.0:
        return HALF_PI
    if method == "agm":
        return _ellip_agm(param.k)[0]
    return _special_quad(lambda th: 1.0 / np.sqrt(1.0 - param.k * np.sin(th) ** 2), tol)


def ellip_E(k: float, tol: Optional[float] = None, method: str = "quad") -> float:
    """Complete elliptic integral of the second kind, E(k), k ≤ 1."""
    if k > 1.0:
        raise DomainError(f"E(k) needs k <= 1, got {k}")
    if k == 0.0:
        return HALF_PI
    if k == 1.0:
        return 1.0
    if method == "agm":
        return _ellip_agm(k)[1]
    return _special_quad(lambda th: np.sqrt(1.0 - k * np.sin(th) ** 2), tol)


def ellip_Pi(n: float, k: float, tol: Optional[float] = None) -> float:
    """Complete elliptic integral of the third kind, Π(n, k), n < 1 and k < 1."""
    param = EllipticParam(k, n)
    if param.n == 0.0:
        return ellip_K(param.k, tol)
    if param.k == 0.0:
        return HALF_PI / math.sqrt(1.0 - param.n)

    def integrand(th: np.ndarray) -> np.ndarray:
        s2 = np.sin(th) ** 2
        return 1.0 / ((1.0 - param.n * s2) * np.sqrt(1.0 - param.k * s2))

    return _special_quad(integrand, tol)


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

def find_root_result(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: Optional[float] = None,
    *,
    secant: bool = True,
    maxiter: int = 200,
) -> RootResult:
    """Bisection with secant acceleration; the bracket at least halves every iteration."""
    if tol is None:
        tol = get_settings().root_tol
    if lo > hi:
        lo, hi = hi, lo
    calls = 2
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return RootResult(lo, 0, calls, 0.0, "exact")
    if fhi == 0.0:
        return RootResult(hi, 0, calls, 0.0, "exact")
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise BracketError(f"f({lo})={flo:.6g} and f({hi})={fhi:.6g} have the same sign")

    def step(x: float) -> Optional[float]:
        nonlocal lo, hi, flo, fhi, calls
        fx = f(x)
        calls += 1
        if fx == 0.0:
            return x
        if math.copysign(1.0, fx) == math.copysign(1.0, flo):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        return None

    for iteration in range(1, maxiter + 1):
        width = hi - lo
        if width <= tol:
            break
        mid = lo + 0.5 * width
        if mid <= lo or mid >= hi:
            break
        x = mid
        if secant:
            candidate = hi - fhi * (hi - lo) / (fhi - flo)
            if lo < candidate < hi:
                x = candidate
        hit = step(x)
        if hit is not None:
            return RootResult(hit, iteration, calls, 0.0, "secant" if secant else "bisection")
        if secant and hi - lo > 0.5 * width:
            mid = lo + 0.5 * (hi - lo)
            if lo < mid < hi:
                hit = step(mid)
                if hit is not None:
                    return RootResult(hit, iteration, calls, 0.0, "secant")
    else:
        raise NumericalError(f"root finder exhausted {maxiter} iterations, bracket {hi - lo:.3e}")

    root = lo if abs(flo) <= abs(fhi) else hi
    return RootResult(root, iteration, calls, hi - lo, "secant" if secant else "bisection")


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: Optional[float] = None,
    *,
    secant: bool = True,
) -> float:
    """Root of f in [lo, hi]; raises BracketError without a sign change."""
    return find_root_result(f, lo, hi, tol, secant=secant).root
