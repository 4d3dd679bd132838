"""ECH index arithmetic and capacity sequences.

Orbit data (self-linking of the doubled orbit, linking numbers, Conley–Zehnder
indices of iterates) are supplied by the caller; this module only combines them:

    |α| = Σ (mᵢ²/4)·sl(αᵢ²) + Σ_{i≠j} (1/4)·mᵢmⱼ·lk(αᵢ², αⱼ²) + Σᵢ Σ_{k≤mᵢ} CZ(αᵢᵏ)

The second sum runs over ordered pairs, so every unordered pair contributes
(1/2)·mᵢmⱼ·lk.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from .errors import DegenerateOrbitError, DomainError, HomologyError, IntegralityError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi

# 1/c closer than this to an integer counts as a resonant equator
_RESONANCE_TOL = 1e-12


@dataclass(frozen=True)
class OrbitDatum:
    """A simple Reeb orbit with the integers the index formula needs."""

    name: str
    sl_square: int
    cz: Mapping[int, int]
    homology_class: int
    action: float

    def __post_init__(self) -> None:
        if self.homology_class not in (0, 1):
            raise DomainError(f"{self.name}: homology class must be 0 or 1, got {self.homology_class}")
        if not self.action > 0:
            raise DomainError(f"{self.name}: action must be positive, got {self.action}")
        if any(k < 1 for k in self.cz):
            raise DomainError(f"{self.name}: CZ indices are keyed by iterate count k >= 1")

    def iterate_cz(self, k: int) -> int:
        try:
            return int(self.cz[k])
        except KeyError:
            raise DomainError(f"{self.name}: CZ index of iterate {k} not supplied") from None


@dataclass(frozen=True)
class OrbitSet:
    entries: Tuple[Tuple[OrbitDatum, int], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        names = [orbit.name for orbit, _ in self.entries]
        if len(set(names)) != len(names):
            raise DomainError(f"orbit set has repeated orbits: {names}")
        for orbit, m in self.entries:
            if m < 1:
                raise DomainError(f"{orbit.name}: multiplicity must be >= 1, got {m}")

    @classmethod
    def of(cls, *entries: Tuple[OrbitDatum, int]) -> "OrbitSet":
        return cls(tuple(entries))

    def homology_class(self) -> int:
        """Σ mᵢ[αᵢ] in H₁ ≅ ℤ₂."""
        return sum(m * orbit.homology_class for orbit, m in self.entries) % 2

    @property
    def label(self) -> str:
        parts = [orbit.name if m == 1 else f"{orbit.name}^{m}" for orbit, m in self.entries]
        return "·".join(parts) or "∅"


@dataclass(frozen=True)
class LinkingTable:
    """Symmetric linking numbers lk(αᵢ², αⱼ²) keyed by unordered name pairs."""

    values: Dict[FrozenSet[str], int] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, pairs: Mapping[Tuple[str, str], int]) -> "LinkingTable":
        values: Dict[FrozenSet[str], int] = {}
        for (a, b), lk in pairs.items():
            if a == b:
                raise DomainError(f"linking table entry ({a}, {b}) is on the diagonal")
            key = frozenset((a, b))
            if key in values and values[key] != lk:
                raise DomainError(f"linking table is not symmetric for ({a}, {b})")
            values[key] = int(lk)
        return cls(values)

    def lk(self, a: str, b: str) -> int:
        try:
            return self.values[frozenset((a, b))]
        except KeyError:
            raise DomainError(f"no linking number for ({a}, {b})") from None


def ech_index(s: OrbitSet, lk: LinkingTable) -> int:
    """ECH index of a nullhomologous orbit set, computed in exact rationals."""
    if s.homology_class() != 0:
        raise HomologyError(f"orbit set {s.label} is not nullhomologous")
    total = Fraction(0)
    for orbit, m in s.entries:
        total += Fraction(m * m, 4) * orbit.sl_square
        total += sum(orbit.iterate_cz(k) for k in range(1, m + 1))
    for i, (a, ma) in enumerate(s.entries):
        for j, (b, mb) in enumerate(s.entries):
            if i != j:
                total += Fraction(ma * mb, 4) * lk.lk(a.name, b.name)
    if total.denominator != 1:
        raise IntegralityError(f"ECH index of {s.label} is {total}, not an integer")
    return int(total)


def total_action(s: OrbitSet) -> float:
    return float(sum(m * orbit.action for orbit, m in s.entries))


def cz_equator(c: float) -> int:
    """CZ index of the equator of E(1,1,c) for 0 < c < 1/2: 2⌊1/c⌋ + 1."""
    if not 0.0 < c < 0.5:
        raise DomainError(f"cz_equator needs 0 < c < 1/2, got {c}")
    inverse = 1.0 / c
    if abs(inverse - round(inverse)) < _RESONANCE_TOL:
        raise DegenerateOrbitError(f"1/c = {inverse:.15g} is an integer: resonant equator")
    return 2 * math.floor(inverse) + 1


def zoll_capacities(ell: float, k_max: int) -> List[float]:
    """(c₀, …, c_{k_max}) of a Zoll domain with geodesic length ℓ.

    The values are ℓ(m₁ + m₂) over m₁ + m₂ even; the sum 2n occurs 2n + 1 times.
    """
    if not ell > 0:
        raise DomainError(f"ell must be positive, got {ell}")
    if k_max < 0:
        raise DomainError(f"k_max must be non-negative, got {k_max}")
    values: List[float] = []
    n = 0
    while len(values) <= k_max:
        values.extend([ell * (2 * n)] * (2 * n + 1))
        n += 1
    return values[: k_max + 1]


def ball_capacities(a: float, k_max: int) -> List[float]:
    """ECH capacities of B⁴(a): c_k = a·d with d the least integer where k ≤ d(d + 3)/2."""
    if not a > 0:
        raise DomainError(f"ball size must be positive, got {a}")
    if k_max < 0:
        raise DomainError(f"k_max must be non-negative, got {k_max}")
    values = []
    d = 0
    for k in range(k_max + 1):
        while k > d * (d + 3) // 2:
            d += 1
        values.append(a * d)
    return values


def zoll_width_bound(ell: float) -> float:
    """c₃/2 of a Zoll domain: the ball obstruction 2a ≤ c₃ gives width ≤ ℓ."""
    return 0.5 * zoll_capacities(ell, 3)[3]


def spheroid_capacity(c: float, k: int) -> float:
    """c₃ = 2w(c) for 0 < c < c₀ and c₁ = 4π for c ≥ 1; nothing else is exposed."""
    from .spheroid_widths import c0, gromov_width

    if not c > 0:
        raise DomainError(f"spheroid parameter c must be positive, got {c}")
    if k == 3:
        if c >= c0():
            raise DomainError(f"c3 is only known for c < c0 = {c0():.12g}, got {c}")
        return 2.0 * gromov_width(c)
    if k == 1:
        if c < 1.0:
            raise DomainError(f"c1 is only known for c >= 1, got {c}")
        return FOUR_PI
    raise DomainError(f"only c1 and c3 are available, got k = {k}")


@dataclass(frozen=True)
class CapacityCandidate:
    """Low-action orbit set competing for c₃ of an oblate spheroid."""

    orbit_set: OrbitSet
    action: float
    index: Optional[int]

    def to_dict(self) -> Dict[str, object]:
        return {"orbits": self.orbit_set.label, "action": self.action, "index": self.index}


def equator_orbits(c: float) -> Tuple[OrbitDatum, OrbitDatum]:
    """The two orientations γ₁, γ̄₁ of the equator (action 2π each)."""
    cz = cz_equator(c)
    return (
        OrbitDatum("γ1", -2, {1: cz}, 1, TWO_PI),
        OrbitDatum("γ̄1", -2, {1: cz}, 1, TWO_PI),
    )


def c3_candidates(c: float) -> List[CapacityCandidate]:
    """Orbit sets γ₁γ̄₁, γ_eγ̄_e and equator + meridian for 0 < c < 1/2, sorted by action.

    The index of the equator + meridian set needs linking data that is not
    computed here and is reported as None.
    """
    from .spheroid_widths import alpha, beta

    if not 0.0 < c < 0.5:
        raise DomainError(f"c3_candidates needs 0 < c < 1/2, got {c}")
    a = alpha(c)
    candidates = []

    try:
        gamma, gamma_bar = equator_orbits(c)
    except DegenerateOrbitError as e:
        logger.warning(f"⚠️ {e}; equator index left undetermined")
        gamma = OrbitDatum("γ1", -2, {}, 1, TWO_PI)
        gamma_bar = OrbitDatum("γ̄1", -2, {}, 1, TWO_PI)
        equators = OrbitSet.of((gamma, 1), (gamma_bar, 1))
        candidates.append(CapacityCandidate(equators, total_action(equators), None))
    else:
        equators = OrbitSet.of((gamma, 1), (gamma_bar, 1))
        table = LinkingTable.from_pairs({("γ1", "γ̄1"): 2})
        candidates.append(CapacityCandidate(equators, total_action(equators), ech_index(equators, table)))

    gamma_e = OrbitDatum("γe", -2, {1: 3}, 1, a)
    gamma_e_bar = OrbitDatum("γ̄e", -2, {1: 3}, 1, a)
    figure_eights = OrbitSet.of((gamma_e, 1), (gamma_e_bar, 1))
    table = LinkingTable.from_pairs({("γe", "γ̄e"): 2})
    candidates.append(CapacityCandidate(figure_eights, total_action(figure_eights), ech_index(figure_eights, table)))

    mixed = OrbitSet.of((OrbitDatum("γ1", -2, {}, 1, TWO_PI), 1), (OrbitDatum("meridian", -2, {}, 1, beta(c)), 1))
    candidates.append(CapacityCandidate(mixed, total_action(mixed), None))
    return sorted(candidates, key=lambda cand: cand.action)
