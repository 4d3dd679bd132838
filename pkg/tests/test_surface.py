#!/usr/bin/env python3
"""
Testy profili sfer obrotowych
"""

import math
import unittest

import numpy as np

from src.errors import DomainError
from src.surface import (
    SurfaceProfile,
    egg_profile,
    equator_length,
    named_profile,
    spheroid_profile,
    turning_points,
    turning_points_generic,
    validate_profile,
)


class TestSpheroidProfile(unittest.TestCase):
    """Sferoida E(1,1,c)"""

    def test_round_sphere(self):
        """Test: c = 1 to sfera okrągła z równikiem długości 2π"""
        p = spheroid_profile(1.0)
        self.assertEqual(p.label, "round")
        self.assertEqual(p.equator_radius, 1.0)
        self.assertAlmostEqual(equator_length(p), 2.0 * math.pi, places=14)

    def test_closed_form_turning_points(self):
        """Test: z± = ±c√(1 − j²/h) z dokładnymi odległościami od biegunów"""
        for c in (0.3, 1.0, 2.0):
            for j in (0.0, 0.2, 0.7):
                with self.subTest(c=c, j=j):
                    pair = turning_points(spheroid_profile(c), 1.0, j)
                    z_plus = c * math.sqrt(1.0 - j * j)
                    self.assertAlmostEqual(pair.z_plus, z_plus, places=14)
                    self.assertAlmostEqual(pair.z_minus, -z_plus, places=14)
                    self.assertAlmostEqual(pair.above, c - z_plus, places=14)

    def test_closed_form_matches_root_finder(self):
        """Test: wzór zamknięty zgadza się z ogólnym szukaniem pierwiastków"""
        for c in (0.4, 1.5):
            for h, j in ((1.0, 0.3), (0.5, 0.6), (0.8, 0.05)):
                with self.subTest(c=c, h=h, j=j):
                    p = spheroid_profile(c)
                    exact = turning_points(p, h, j)
                    generic = turning_points_generic(p, h, j)
                    self.assertAlmostEqual(exact.z_plus, generic.z_plus, places=10)
                    self.assertAlmostEqual(exact.z_minus, generic.z_minus, places=10)

    def test_hooks_match_plain_evaluation(self):
        """Test: u² i 1 + u′² z odległości zgadzają się z u, u′"""
        p = spheroid_profile(0.7)
        z = np.array([-0.5, 0.0, 0.3, 0.69])
        da, db = z - p.a, p.b - z
        np.testing.assert_allclose(p.radius_sq(z, da, db), p.u(z) ** 2, rtol=1e-13)
        np.testing.assert_allclose(p.speed_sq(z, da, db), 1.0 + p.du(z) ** 2, rtol=1e-12)

    def test_outside_region(self):
        """Test: |j| > u(z0)√h zgłasza DomainError"""
        with self.assertRaises(DomainError):
            turning_points(spheroid_profile(1.0), 1.0, 1.5)
        with self.assertRaises(DomainError):
            turning_points(spheroid_profile(1.0), 0.0, 0.1)

    def test_non_positive_c(self):
        """Test: c ≤ 0 zgłasza DomainError"""
        with self.assertRaises(DomainError):
            spheroid_profile(0.0)


class TestEggProfile(unittest.TestCase):
    """Profil jajowaty u(z) = √(1 − z²)(1 + eps·z)"""

    @classmethod
    def setUpClass(cls):
        cls.egg = egg_profile(0.2)

    def test_equator_is_critical(self):
        """Test: u′(z0) = 0 i z0 to maksimum u"""
        self.assertAlmostEqual(float(self.egg.du(self.egg.z0)), 0.0, places=12)
        z = np.linspace(-0.99, 0.99, 199)
        self.assertLessEqual(float(np.max(self.egg.u(z))), self.egg.equator_radius + 1e-12)

    def test_valid_profile(self):
        """Test: profil jajowaty przechodzi walidację"""
        self.assertIs(validate_profile(self.egg), self.egg)

    def test_generic_turning_points(self):
        """Test: h·u(z±)² = j²"""
        pair = turning_points(self.egg, 1.0, 0.5)
        self.assertAlmostEqual(float(self.egg.u(pair.z_plus)) ** 2, 0.25, places=10)
        self.assertAlmostEqual(float(self.egg.u(pair.z_minus)) ** 2, 0.25, places=10)
        self.assertLess(pair.z_minus, self.egg.z0)
        self.assertGreater(pair.z_plus, self.egg.z0)

    def test_turning_points_near_pole(self):
        """Test: dla j = 1e-6 odległości od biegunów spełniają h·u² = j² względnie do 1e-10"""
        j = 1e-6
        pair = turning_points(self.egg, 1.0, j)
        for d, side in ((pair.below, -1.0), (pair.above, 1.0)):
            z = side * (1.0 - d)
            value = d * (2.0 - d) * (1.0 + 0.2 * z) ** 2
            self.assertGreater(d, 0.0)
            self.assertLess(abs(value - j * j) / (j * j), 1e-10)
        self.assertAlmostEqual(pair.z_minus - self.egg.a, pair.below, places=15)

    def test_clairaut_gap_matches_direct_form(self):
        """Test: rozkład h·u² − j² zgadza się z bezpośrednim wzorem wewnątrz [z₋, z₊]"""
        pair = turning_points(self.egg, 1.0, 0.5)
        z = np.linspace(pair.z_minus, pair.z_plus, 11)[1:-1]
        gap = self.egg.clairaut_gap(z, pair, z - pair.z_minus, pair.z_plus - z)
        np.testing.assert_allclose(gap, np.asarray(self.egg.u(z)) ** 2 - 0.25, atol=1e-12)
        self.assertTrue(np.all(gap > 0.0))

    def test_clairaut_gap_at_pole(self):
        """Test: dla j = 0 luka przy biegunie jest dodatnia i równa h·u²"""
        pair = turning_points(self.egg, 1.0, 0.0)
        dp = np.array([1e-17])
        z = 1.0 - dp
        gap = self.egg.clairaut_gap(z, pair, 2.0 - dp, dp)
        expected = self.egg.radius_sq(z, 2.0 - dp, dp)
        self.assertGreater(float(gap[0]), 0.0)
        self.assertAlmostEqual(float(gap[0] / expected[0]), 1.0, places=14)

    def test_bad_eps(self):
        """Test: |eps| ≥ 1/2 zgłasza DomainError"""
        with self.assertRaises(DomainError):
            egg_profile(0.6)


class TestValidation(unittest.TestCase):
    """Walidacja i rejestr nazwanych profili"""

    def test_two_equators_rejected(self):
        """Test: profil z kilkoma maksimami jest odrzucany"""

        def u(z):
            z = np.asarray(z, dtype=float)
            return np.sqrt(np.maximum(1.0 - z * z, 0.0)) * (1.5 + np.cos(4.0 * math.pi * z))

        def du(z):
            z = np.asarray(z, dtype=float)
            r = np.sqrt(np.maximum(1.0 - z * z, 1e-300))
            return -z / r * (1.5 + np.cos(4.0 * math.pi * z)) - r * 4.0 * math.pi * np.sin(4.0 * math.pi * z)

        wavy = SurfaceProfile(u=u, du=du, a=-1.0, b=1.0, z0=0.0, label="wavy")
        with self.assertRaises(DomainError):
            validate_profile(wavy)

    def test_equator_outside_interval(self):
        """Test: z0 poza (a, b) zgłasza DomainError"""
        with self.assertRaises(DomainError):
            SurfaceProfile(u=np.cos, du=np.sin, a=0.0, b=1.0, z0=2.0)

    def test_named_profiles(self):
        """Test: round, egg[:eps], spheroid:<c>"""
        self.assertEqual(named_profile("round").label, "round")
        self.assertEqual(named_profile("egg").eps, 0.2)
        self.assertEqual(named_profile("egg:0.1").eps, 0.1)
        self.assertEqual(named_profile("spheroid:2").c, 2.0)

    def test_unknown_profile(self):
        """Test: nieznana nazwa lub zły argument zgłasza DomainError"""
        for name in ("torus", "spheroid", "spheroid:abc", "round:2"):
            with self.subTest(name=name):
                with self.assertRaises(DomainError):
                    named_profile(name)


if __name__ == "__main__":
    unittest.main()
