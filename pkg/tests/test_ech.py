#!/usr/bin/env python3
"""
Testy arytmetyki indeksu ECH i ciągów pojemności
"""

import math
import unittest

from src.ech import (
    LinkingTable,
    OrbitDatum,
    OrbitSet,
    ball_capacities,
    c3_candidates,
    cz_equator,
    ech_index,
    equator_orbits,
    spheroid_capacity,
    total_action,
    zoll_capacities,
    zoll_width_bound,
)
from src.errors import DegenerateOrbitError, DomainError, HomologyError, IntegralityError
from src.spheroid_widths import alpha, c0, gromov_width

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi


def pair_of_orbits(cz, lk=2, action=1.0):
    first = OrbitDatum("a", -2, {1: cz}, 1, action)
    second = OrbitDatum("b", -2, {1: cz}, 1, action)
    table = LinkingTable.from_pairs({("a", "b"): lk})
    return OrbitSet.of((first, 1), (second, 1)), table


class TestEchIndex(unittest.TestCase):
    """Indeks ECH zbioru orbit"""

    def test_figure_eight_pair(self):
        """Test: sl = −2, lk = 2, CZ = 3 daje indeks 6"""
        s, table = pair_of_orbits(3)
        self.assertEqual(ech_index(s, table), 6)

    def test_elliptic_pair(self):
        """Test: sl = −2, lk = 2, CZ = 1 daje indeks 2"""
        s, table = pair_of_orbits(1)
        self.assertEqual(ech_index(s, table), 2)

    def test_empty_set(self):
        """Test: pusty zbiór orbit ma indeks 0 i akcję 0"""
        self.assertEqual(ech_index(OrbitSet(), LinkingTable()), 0)
        self.assertEqual(total_action(OrbitSet()), 0.0)
        self.assertEqual(OrbitSet().label, "∅")

    def test_order_does_not_matter(self):
        """Test: kolejność orbit nie zmienia indeksu"""
        first = OrbitDatum("a", -2, {1: 1}, 1, 1.0)
        second = OrbitDatum("b", -2, {1: 5}, 1, 1.0)
        table = LinkingTable.from_pairs({("b", "a"): 2})
        forward = OrbitSet.of((first, 1), (second, 1))
        backward = OrbitSet.of((second, 1), (first, 1))
        self.assertEqual(ech_index(forward, table), ech_index(backward, table))

    def test_iterates_use_their_own_cz(self):
        """Test: orbita podwójna sumuje CZ iteracji 1 i 2"""
        orbit = OrbitDatum("e", -2, {1: 1, 2: 3}, 1, 1.0)
        # (4/4)(−2) + 1 + 3
        self.assertEqual(ech_index(OrbitSet.of((orbit, 2)), LinkingTable()), 2)

    def test_not_nullhomologous(self):
        """Test: zbiór w klasie niezerowej zgłasza HomologyError"""
        orbit = OrbitDatum("a", -2, {1: 1}, 1, 1.0)
        with self.assertRaises(HomologyError):
            ech_index(OrbitSet.of((orbit, 1)), LinkingTable())

    def test_fractional_index(self):
        """Test: niecałkowity wynik zgłasza IntegralityError"""
        orbit = OrbitDatum("a", -2, {1: 1}, 0, 1.0)
        with self.assertRaises(IntegralityError):
            ech_index(OrbitSet.of((orbit, 1)), LinkingTable())

    def test_missing_data(self):
        """Test: brak CZ iteracji lub liczby splotu zgłasza DomainError"""
        orbit = OrbitDatum("a", -2, {1: 1}, 0, 1.0)
        with self.assertRaises(DomainError):
            ech_index(OrbitSet.of((orbit, 2)), LinkingTable())
        s, _ = pair_of_orbits(3)
        with self.assertRaises(DomainError):
            ech_index(s, LinkingTable())

    def test_invalid_data(self):
        """Test: walidacja orbit, zbiorów i tablicy splotów"""
        with self.assertRaises(DomainError):
            OrbitDatum("a", -2, {1: 1}, 2, 1.0)
        with self.assertRaises(DomainError):
            OrbitDatum("a", -2, {1: 1}, 0, 0.0)
        orbit = OrbitDatum("a", -2, {1: 1}, 0, 1.0)
        with self.assertRaises(DomainError):
            OrbitSet.of((orbit, 1), (orbit, 1))
        with self.assertRaises(DomainError):
            OrbitSet.of((orbit, 0))
        with self.assertRaises(DomainError):
            LinkingTable.from_pairs({("a", "a"): 1})
        with self.assertRaises(DomainError):
            LinkingTable.from_pairs({("a", "b"): 1, ("b", "a"): 2})

    def test_total_action(self):
        """Test: akcja to Σ mᵢ·A(αᵢ)"""
        s, _ = pair_of_orbits(3, action=2.5)
        self.assertEqual(total_action(s), 5.0)


class TestCapacities(unittest.TestCase):
    """Ciągi pojemności ECH"""

    def test_zoll_sequence(self):
        """Test: c_k dla obszaru Zoll z ℓ = 2π"""
        expected = [0.0] + [FOUR_PI] * 3 + [8.0 * math.pi] * 5 + [12.0 * math.pi]
        values = zoll_capacities(TWO_PI, 9)
        self.assertEqual(len(values), 10)
        for value, target in zip(values, expected):
            self.assertAlmostEqual(value, target, places=12)

    def test_zoll_scaling(self):
        """Test: c_k(λℓ) = λ·c_k(ℓ)"""
        base = zoll_capacities(1.0, 12)
        scaled = zoll_capacities(3.0, 12)
        for a, b in zip(base, scaled):
            self.assertAlmostEqual(3.0 * a, b, places=12)

    def test_ball_sequence(self):
        """Test: B⁴(1) ma c = (0, 1, 1, 2, 2, 2)"""
        self.assertEqual(ball_capacities(1.0, 5), [0.0, 1.0, 1.0, 2.0, 2.0, 2.0])
        self.assertEqual(ball_capacities(2.0, 9)[9], 6.0)

    def test_zoll_width_bound(self):
        """Test: c₃/2 obszaru Zoll to ℓ"""
        self.assertAlmostEqual(zoll_width_bound(TWO_PI), TWO_PI, places=12)

    def test_bad_arguments(self):
        """Test: ℓ ≤ 0 lub k_max < 0 zgłasza DomainError"""
        with self.assertRaises(DomainError):
            zoll_capacities(0.0, 3)
        with self.assertRaises(DomainError):
            zoll_capacities(1.0, -1)
        with self.assertRaises(DomainError):
            ball_capacities(-1.0, 3)

    def test_spheroid_capacities(self):
        """Test: c₃ = 2w dla c < c₀ oraz c₁ = 4π dla c ≥ 1"""
        self.assertAlmostEqual(spheroid_capacity(0.75, 3), FOUR_PI, places=12)
        self.assertAlmostEqual(spheroid_capacity(0.3, 3), 2.0 * alpha(0.3), places=12)
        self.assertAlmostEqual(spheroid_capacity(1.5, 3), 2.0 * gromov_width(1.5), places=12)
        self.assertEqual(spheroid_capacity(2.0, 1), FOUR_PI)
        self.assertEqual(spheroid_capacity(5.0, 1), FOUR_PI)

    def test_spheroid_capacity_domain(self):
        """Test: c₃ dla c ≥ c₀, c₁ dla c < 1 oraz inne k są niedostępne"""
        with self.assertRaises(DomainError):
            spheroid_capacity(c0() + 0.1, 3)
        with self.assertRaises(DomainError):
            spheroid_capacity(0.7, 1)
        with self.assertRaises(DomainError):
            spheroid_capacity(1.5, 2)
        with self.assertRaises(DomainError):
            spheroid_capacity(-1.0, 3)


class TestEquatorOrbits(unittest.TestCase):
    """Równik spłaszczonej sferoidy"""

    def test_cz_equator(self):
        """Test: CZ = 2⌊1/c⌋ + 1"""
        self.assertEqual(cz_equator(0.3), 7)
        self.assertEqual(cz_equator(0.45), 5)
        self.assertEqual(cz_equator(0.24), 9)

    def test_resonant_equator(self):
        """Test: 1/c całkowite zgłasza DegenerateOrbitError"""
        with self.assertRaises(DegenerateOrbitError):
            cz_equator(0.25)

    def test_cz_domain(self):
        """Test: c ≥ 1/2 zgłasza DomainError"""
        with self.assertRaises(DomainError):
            cz_equator(0.6)

    def test_equator_orbits(self):
        """Test: dwie orientacje równika, każda o akcji 2π"""
        gamma, gamma_bar = equator_orbits(0.3)
        self.assertEqual(gamma.action, TWO_PI)
        self.assertEqual(gamma_bar.iterate_cz(1), 7)

    def test_candidates(self):
        """Test: kandydaci na c₃ są posortowani według akcji"""
        candidates = c3_candidates(0.3)
        self.assertEqual(len(candidates), 3)
        actions = [cand.action for cand in candidates]
        self.assertEqual(actions, sorted(actions))
        by_label = {cand.orbit_set.label: cand for cand in candidates}
        self.assertEqual(by_label["γe·γ̄e"].index, 6)
        self.assertAlmostEqual(by_label["γe·γ̄e"].action, 2.0 * alpha(0.3), places=12)
        self.assertEqual(by_label["γ1·γ̄1"].index, 14)
        self.assertIsNone(by_label["γ1·meridian"].index)
        self.assertEqual(sorted(candidates[0].to_dict()), ["action", "index", "orbits"])

    def test_candidates_at_resonance(self):
        """Test: przy 1/c całkowitym indeks równika pozostaje nieokreślony"""
        with self.assertLogs("src.ech", level="WARNING"):
            candidates = c3_candidates(0.25)
        by_label = {cand.orbit_set.label: cand for cand in candidates}
        self.assertIsNone(by_label["γ1·γ̄1"].index)
        self.assertEqual(by_label["γe·γ̄e"].index, 6)


if __name__ == "__main__":
    unittest.main()
