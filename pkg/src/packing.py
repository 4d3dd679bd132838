"""Weight sequences of weakly convex toric domains and triangle packings.

A weakly convex Ω sits in the smallest triangle T(w₀) = {x, y ≥ 0, x + y ≤ w₀}.
The two corner regions of T(w₀)∖Ω are brought to a standard frame by integral
affine maps: corner at the origin, region under a curve from (0, Y) to (X, 0).
In that frame the largest triangle T(w) at the corner has w = min(x + y) over
the curve, and the rest of the region splits at the minimiser into two pieces
of the same kind. The sizes met along the way are the weight sequence.

Every peeled triangle keeps its placement in the coordinates of Ω, so packings
built from a weight sequence can be checked directly by verify_packing.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .action_profile import DomainClass, ToricProfile, classify, max_inscribed_triangle
from .config import get_settings
from .errors import ClassificationError, DomainError, InconsistencyError, IndeterminateError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi

Matrix = Tuple[Tuple[int, int], Tuple[int, int]]
IDENTITY: Matrix = ((1, 0), (0, 1))

# corner frames of T(w₀): x ↦ M·(x − corner)
_LOWER_CORNER: Matrix = ((0, 1), (-1, -1))
_UPPER_CORNER: Matrix = ((-1, -1), (1, 0))
# pieces left and right of the minimiser in a standard frame
_LEFT_PIECE: Matrix = ((1, 0), (1, 1))
_RIGHT_PIECE: Matrix = ((1, 1), (0, 1))


@dataclass(frozen=True)
class AffineFrame:
    """x ↦ linear·x + offset with an integral linear part of determinant ±1."""

    linear: Matrix = IDENTITY
    offset: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        (a, b), (c, d) = self.linear
        if any(int(v) != v for v in (a, b, c, d)):
            raise DomainError(f"linear part must be integral, got {self.linear}")
        linear = ((int(a), int(b)), (int(c), int(d)))
        if linear[0][0] * linear[1][1] - linear[0][1] * linear[1][0] not in (1, -1):
            raise DomainError(f"linear part must have determinant ±1, got {self.linear}")
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "offset", (float(self.offset[0]), float(self.offset[1])))

    @classmethod
    def peel(cls, matrix: Matrix, corner: Sequence[float]) -> "AffineFrame":
        """The map x ↦ matrix·(x − corner)."""
        (a, b), (c, d) = matrix
        x, y = corner
        return cls(matrix, (-(a * x + b * y), -(c * x + d * y)))

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.linear
        return a * d - b * c

    def apply(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return pts @ np.asarray(self.linear, dtype=float).T + np.asarray(self.offset)

    def inverse(self) -> "AffineFrame":
        (a, b), (c, d) = self.linear
        s = self.det
        return AffineFrame.peel(((s * d, -s * b), (-s * c, s * a)), self.offset)

    def compose(self, inner: "AffineFrame") -> "AffineFrame":
        """self ∘ inner."""
        linear = np.asarray(self.linear) @ np.asarray(inner.linear)
        return AffineFrame(tuple(map(tuple, linear.tolist())), tuple(self.apply(inner.offset).tolist()))


@dataclass(frozen=True)
class TrianglePlacement:
    """Image linear·T(size) + offset of the standard triangle."""

    size: float
    linear: Matrix = IDENTITY
    offset: Tuple[float, float] = (0.0, 0.0)
    label: str = ""

    def __post_init__(self) -> None:
        if not self.size >= 0:
            raise DomainError(f"triangle size must be non-negative, got {self.size}")
        frame = AffineFrame(self.linear, self.offset)
        object.__setattr__(self, "linear", frame.linear)
        object.__setattr__(self, "offset", frame.offset)

    @classmethod
    def from_frame(cls, size: float, frame: AffineFrame, label: str = "") -> "TrianglePlacement":
        return cls(size, frame.linear, frame.offset, label)

    @property
    def frame(self) -> AffineFrame:
        return AffineFrame(self.linear, self.offset)

    def vertices(self) -> np.ndarray:
        s = self.size
        return self.frame.apply([[0.0, 0.0], [s, 0.0], [0.0, s]])

    def exact_vertices(self) -> List[Tuple[Fraction, Fraction]]:
        s = Fraction(self.size)
        ox, oy = (Fraction(v) for v in self.offset)
        (a, b), (c, d) = self.linear
        return [(ox + a * x + b * y, oy + c * x + d * y) for x, y in ((0, 0), (s, 0), (0, s))]

    def to_dict(self) -> Dict[str, object]:
        return {
            "size": self.size,
            "linear": [list(row) for row in self.linear],
            "offset": list(self.offset),
            "label": self.label,
        }


@dataclass(frozen=True)
class WeightSequence:
    """(w₀; w₁, w₂, …) with the placement of every wᵢ in the coordinates of Ω."""

    head: float
    tail: Tuple[float, ...] = ()
    depth: int = 6
    pieces: Tuple[TrianglePlacement, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "tail", tuple(float(w) for w in self.tail))
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if self.pieces and len(self.pieces) != len(self.tail):
            raise DomainError("weight sequence needs one placement per tail entry")
        if any(w <= 0 for w in self.tail) or any(a < b for a, b in zip(self.tail, self.tail[1:])):
            raise DomainError(f"tail must be positive and non-increasing, got {self.tail}")
        if self.tail and self.tail[0] > self.head * (1.0 + 1e-12):
            raise DomainError(f"tail entry {self.tail[0]} exceeds head {self.head}")

    @property
    def weights(self) -> Tuple[float, ...]:
        return (self.head,) + self.tail

    def to_dict(self) -> Dict[str, object]:
        return {"head": self.head, "tail": list(self.tail), "depth": self.depth}


@dataclass(frozen=True)
class Packing:
    container: float
    pieces: Tuple[TrianglePlacement, ...] = ()
    ball: Optional[TrianglePlacement] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            "container": self.container,
            "pieces": [p.to_dict() for p in self.pieces],
            "ball": self.ball.to_dict() if self.ball is not None else None,
        }


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    violations: Tuple[str, ...] = ()
    checked_pairs: int = 0

    def to_dict(self) -> Dict[str, object]:
        return {"ok": self.ok, "violations": list(self.violations), "checked_pairs": self.checked_pairs}


@dataclass(frozen=True)
class EmbeddingVerdict:
    c: float
    width_lower_bound: float
    method: str

    def to_dict(self) -> Dict[str, object]:
        return {"c": self.c, "width_lower_bound": self.width_lower_bound, "method": self.method}


# ---------------------------------------------------------------------------
# weight sequence
# ---------------------------------------------------------------------------

@dataclass
class _Region:
    """Corner region in a standard frame; ``to_local`` maps Ω-coordinates into it."""

    label: str
    to_local: AffineFrame
    points: np.ndarray
    j: np.ndarray
    level: int


@dataclass
class _Peeler:
    profile: ToricProfile
    depth: int
    floor: float
    found: List[TrianglePlacement] = field(default_factory=list)

    def _refine(self, region: _Region, k: int, sign: float) -> Optional[Tuple[float, float, np.ndarray]]:
        """Local optimum of sign·(x + y) in region coordinates between samples k ± 1."""
        evaluator = self.profile.evaluator
        if evaluator is None or not 0 < k < len(region.j) - 1:
            return None

        def objective(jj: float) -> float:
            return sign * float(region.to_local.apply(evaluator(jj)).sum())

        lo, hi = sorted((float(region.j[k - 1]), float(region.j[k + 1])))
        found = minimize_scalar(objective, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        if not found.success:
            return None
        point = region.to_local.apply(evaluator(float(found.x)))
        return sign * float(found.fun), float(found.x), point

    def _split(self, region: _Region, k_left: int, k_right: int, value: float, sign: float):
        pts, js = region.points, region.j
        refined = self._refine(region, k_left, sign) if k_left == k_right else None
        if refined is not None and sign * refined[0] < sign * value:
            value, jj, point = refined
            left = (np.vstack([pts[:k_left], point]), np.append(js[:k_left], jj))
            right = (np.vstack([point, pts[k_left + 1:]]), np.insert(js[k_left + 1:], 0, jj))
        else:
            left = (pts[: k_left + 1], js[: k_left + 1])
            right = (pts[k_right:], js[k_right:])
        return value, left, right

    def peel(self, region: _Region) -> None:
        pts = region.points
        if region.level > self.depth or len(pts) < 2:
            return
        if pts[-1, 0] <= self.floor or pts[0, 1] <= self.floor:
            return
        sums = pts.sum(axis=1)
        w = float(sums.min())
        flat = np.flatnonzero(sums <= w + self.floor)
        w, left, right = self._split(region, int(flat[0]), int(flat[-1]), w, 1.0)
        if w <= self.floor:
            return
        self.found.append(TrianglePlacement.from_frame(w, region.to_local.inverse(), region.label))
        for name, matrix, corner, (sub_pts, sub_j) in (
            ("L", _LEFT_PIECE, (0.0, w), left),
            ("R", _RIGHT_PIECE, (w, 0.0), right),
        ):
            step = AffineFrame.peel(matrix, corner)
            self.peel(_Region(
                label=f"{region.label}.{name}",
                to_local=step.compose(region.to_local),
                points=step.apply(sub_pts),
                j=sub_j,
                level=region.level + 1,
            ))


def _require_weakly_convex(t: ToricProfile) -> None:
    try:
        kind = classify(t)
    except IndeterminateError as e:
        raise ClassificationError(f"cannot classify the domain: {e}") from e
    if kind is not DomainClass.WEAKLY_CONVEX:
        raise ClassificationError(f"weight sequences need a weakly convex domain, got {kind.value}")


def weight_sequence(t: ToricProfile, depth: Optional[int] = None) -> WeightSequence:
    """(w₀; w₁, w₂, …) of a weakly convex toric domain, peeled to the given depth."""
    _require_weakly_convex(t)
    depth = get_settings().packing_depth if depth is None else depth
    if depth < 1:
        raise DomainError(f"depth must be at least 1, got {depth}")

    whole = _Region("Ω", AffineFrame(), t.points, t.j, 0)
    total = t.points.sum(axis=1)
    w0 = float(total.max())
    floor = get_settings().packing_tol * w0
    peeler = _Peeler(t, depth, floor)
    flat = np.flatnonzero(total >= w0 - floor)
    w0, lower, upper = peeler._split(whole, int(flat[0]), int(flat[-1]), w0, -1.0)
    peeler.floor = get_settings().packing_tol * w0
    # lower: samples from (A, 0) to the touching point; upper: from there to (0, B)
    for label, matrix, corner, (pts, js) in (
        ("1", _LOWER_CORNER, (w0, 0.0), lower),
        ("2", _UPPER_CORNER, (0.0, w0), upper),
    ):
        step = AffineFrame.peel(matrix, corner)
        peeler.peel(_Region(label, step, step.apply(pts), js, 1))

    pieces = sorted(peeler.found, key=lambda p: -p.size)
    logger.debug(f"🔍 weight sequence: w0 = {w0:.12g}, {len(pieces)} weights to depth {depth}")
    tail = tuple(p.size for p in pieces)
    if sum(w * w for w in tail) > w0 * w0 * (1.0 + 1e-9):
        raise InconsistencyError(f"weights exceed the volume of T({w0:.12g})")
    return WeightSequence(head=w0, tail=tail, depth=depth, pieces=tuple(pieces))


# ---------------------------------------------------------------------------
# packings of prolate spheroids
# ---------------------------------------------------------------------------

def build_prolate_packing(c: float, depth: Optional[int] = None) -> Packing:
    """B⁴(β(c)) ⊔ ⨆ B⁴(wᵢ) inside T(2β(c)) for 1 < c ≤ c₀.

    The upper-corner triangles and T(w₁) stay where they are. T(w₃) moves into Ω
    next to the diagonal, the triangles peeled after it go to the strip under
    y = 2π left of the diagonal, and the ball takes the half of [0, β]² under
    the diagonal.
    """
    from .spheroid_widths import beta, c0, spheroid_toric_profile

    if not 1.0 < c <= c0():
        raise DomainError(f"prolate packing needs 1 < c <= c0 = {c0():.12g}, got {c}")
    ws = weight_sequence(spheroid_toric_profile(c), depth)
    b = beta(c)
    third = next((p for p in ws.pieces if p.label == "1.L"), None)

    pieces = []
    for piece in ws.pieces:
        if third is None or not piece.label.startswith("1.L"):
            pieces.append(piece)
        elif piece is third:
            pieces.append(TrianglePlacement(piece.size, ((-1, 1), (0, 1)), (TWO_PI, TWO_PI), piece.label))
        else:
            # third-triangle frame, then its remainder corner (w₃, 0) onto (0, 2π)
            into_strip = AffineFrame(IDENTITY, (0.0, TWO_PI)).compose(
                AffineFrame.peel(_LOWER_CORNER, (third.size, 0.0))
            )
            moved = into_strip.compose(third.frame.inverse()).compose(piece.frame)
            pieces.append(TrianglePlacement.from_frame(piece.size, moved, piece.label))

    ball = TrianglePlacement(b, ((1, 1), (0, 1)), (0.0, 0.0), "ball")
    logger.debug(f"🔍 prolate packing c = {c:g}: {len(pieces)} triangles in T({ws.head:.12g})")
    return Packing(container=ws.head, pieces=tuple(pieces), ball=ball)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

Point = Tuple[Fraction, Fraction]


def _penetration(first: List[Point], second: List[Point]) -> Fraction:
    """Smallest squared overlap depth over the edge normals; ≤ 0 means separated."""
    best: Optional[Fraction] = None
    for tri in (first, second):
        for k in range(3):
            (x0, y0), (x1, y1) = tri[k], tri[(k + 1) % 3]
            nx, ny = y1 - y0, x0 - x1
            norm = nx * nx + ny * ny
            if norm == 0:
                continue
            a = [nx * x + ny * y for x, y in first]
            b = [nx * x + ny * y for x, y in second]
            overlap = min(max(a), max(b)) - max(min(a), min(b))
            if overlap <= 0:
                return Fraction(0)
            depth = overlap * overlap / norm
            best = depth if best is None else min(best, depth)
    return best if best is not None else Fraction(0)


def _containment(piece: TrianglePlacement, container: Fraction, tol: Fraction) -> Optional[str]:
    for x, y in piece.exact_vertices():
        if x < -tol or y < -tol or x + y > container + tol:
            return (
                f"{piece.label or 'piece'} (size {piece.size:.12g}) leaves T({float(container):.12g}) "
                f"at vertex ({float(x):.12g}, {float(y):.12g})"
            )
    return None


def verify_packing(p: Packing, ball: float, workers: Optional[int] = None) -> VerificationReport:
    """Check inclusion in T(container) and pairwise interior disjointness in exact rationals.

    Overlaps up to the packing tolerance count as touching.
    """
    settings = get_settings()
    workers = settings.workers if workers is None else workers
    tol = Fraction(settings.packing_tol) * max(1, Fraction(p.container))
    container = Fraction(p.container)
    ball_piece = replace(p.ball, size=ball) if p.ball is not None else TrianglePlacement(ball, label="ball")
    pieces = [ball_piece] + [piece for piece in p.pieces if piece.size > 0]

    violations = [v for v in (_containment(piece, container, tol) for piece in pieces) if v]
    exact = [piece.exact_vertices() for piece in pieces]
    pairs = list(combinations(range(len(pieces)), 2))

    def check(pair: Tuple[int, int]) -> Optional[str]:
        i, k = pair
        depth = _penetration(exact[i], exact[k])
        if depth > tol * tol:
            return (
                f"{pieces[i].label or i} and {pieces[k].label or k} overlap "
                f"(depth {math.sqrt(float(depth)):.3e})"
            )
        return None

    if workers > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            overlaps = list(pool.map(check, pairs))
    else:
        overlaps = [check(pair) for pair in pairs]
    violations += [v for v in overlaps if v]

    if violations:
        logger.warning(f"⚠️ packing has {len(violations)} violations")
    return VerificationReport(ok=not violations, violations=tuple(violations), checked_pairs=len(pairs))


def volume_excess(p: Packing, ball: float) -> float:
    """container² − ball² − Σ sizes²; non-negative for a valid packing."""
    return p.container ** 2 - ball ** 2 - sum(piece.size ** 2 for piece in p.pieces)


def ball_embedding_verdict(c: float) -> EmbeddingVerdict:
    """Lower bound on the Gromov width of D*E(1,1,c) with the construction behind it."""
    from .spheroid_widths import beta, c0, g, spheroid_toric_profile

    if not c > 0:
        raise DomainError(f"spheroid parameter c must be positive, got {c}")
    if c <= 1.0:
        bound = max_inscribed_triangle(spheroid_toric_profile(c))
        return EmbeddingVerdict(c, bound, "triangle")

    limit = c0()
    if c <= limit:
        b = beta(c)
        report = verify_packing(build_prolate_packing(c), b)
        if not report.ok:
            raise InconsistencyError(f"prolate packing for c = {c} failed: {report.violations[0]}")
        return EmbeddingVerdict(c, b, "weight-sequence packing")

    tol = get_settings().quad_tol
    for jj in np.linspace(0.0, 1.0, 17):
        if g(limit, float(jj)) > g(c, float(jj)) + tol:
            raise InconsistencyError(f"g is not increasing in c at j = {jj:g}: Ω_c0 ⊄ Ω_c")
    return EmbeddingVerdict(c, FOUR_PI, "inclusion of Ω_c0")
