#!/usr/bin/env python3
"""
Testy interfejsu linii komend toricw
"""

import io
import json
import math
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

from src import __version__
from src.cli import SWEEP_HEADER, CommandSpec, build_parser, main, to_csv, to_json

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi


def run(*argv):
    """Run the CLI and capture (exit code, stdout)."""
    args = list(argv) + ["--log-level", "WARNING"] if argv else []
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(args)
    return code, out.getvalue()


class TestFormatting(unittest.TestCase):
    """Formatowanie CSV/JSON"""

    def test_twelve_digits(self):
        """Test: liczby mają 12 cyfr znaczących, puste pola dla None"""
        self.assertEqual(to_csv(("a", "b"), [[math.pi, None]]), "a,b\n3.14159265359,\n")
        self.assertEqual(json.loads(to_json({"x": math.pi}))["x"], 3.14159265359)

    def test_command_spec(self):
        """Test: CommandSpec oddziela parametry od opcji wspólnych"""
        args = build_parser().parse_args(["width", "--c", "2", "--format", "json"])
        spec = CommandSpec.from_namespace(args)
        self.assertEqual(spec.subcommand, "width")
        self.assertEqual(spec.parameters, {"c": 2.0})
        self.assertEqual(spec.format, "json")
        self.assertEqual(spec.get("missing", 7), 7)


class TestWidthCommands(unittest.TestCase):
    """width i sweep"""

    def test_width_middle(self):
        """Test: width --c 0.75 daje 2π w reżimie middle"""
        code, out = run("width", "--c", "0.75")
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertAlmostEqual(data["width"], TWO_PI, places=10)
        self.assertEqual(data["regime"], "middle")

    def test_width_capped(self):
        """Test: width --c 5 daje 4π"""
        code, out = run("width", "--c", "5")
        self.assertEqual(code, 0)
        self.assertAlmostEqual(json.loads(out)["width"], FOUR_PI, places=10)

    def test_width_invalid(self):
        """Test: width --c -1 kończy się kodem 2"""
        self.assertEqual(run("width", "--c", "-1")[0], 2)
        self.assertEqual(run("width")[0], 2)

    def test_sweep(self):
        """Test: sweep daje n wierszy z niemalejącą szerokością"""
        code, out = run("sweep", "--c-min", "0.5", "--c-max", "1.5", "--n", "11")
        self.assertEqual(code, 0)
        lines = out.strip().splitlines()
        self.assertEqual(lines[0], ",".join(SWEEP_HEADER))
        self.assertEqual(len(lines), 12)
        rows = [line.split(",") for line in lines[1:]]
        widths = [float(row[1]) for row in rows]
        self.assertEqual(widths, sorted(widths))
        self.assertAlmostEqual(widths[0], TWO_PI, places=10)
        at_one = rows[5]
        self.assertAlmostEqual(float(at_one[0]), 1.0, places=12)
        self.assertAlmostEqual(float(at_one[3]), TWO_PI, places=10)
        # alpha is undefined outside c < 1/2
        self.assertEqual(at_one[2], "")

    def test_sweep_bad_range(self):
        """Test: c_min ≥ c_max kończy się kodem 2"""
        self.assertEqual(run("sweep", "--c-min", "2", "--c-max", "1", "--n", "5")[0], 2)
        self.assertEqual(run("sweep", "--c-min", "1", "--c-max", "2", "--n", "1")[0], 2)

    def test_sweep_non_finite_bound(self):
        """Test: --c-max równe inf lub nan kończy się kodem 2"""
        for bound in ("inf", "nan"):
            with self.subTest(bound=bound):
                self.assertEqual(run("sweep", "--c-min", "1", "--c-max", bound, "--n", "5")[0], 2)

    def test_deterministic(self):
        """Test: te same flagi dają identyczne wyjście"""
        first = run("sweep", "--c-min", "0.3", "--c-max", "2", "--n", "4")
        second = run("sweep", "--c-min", "0.3", "--c-max", "2", "--n", "4", "--workers", "1")
        self.assertEqual(first, second)


class TestProfileCommands(unittest.TestCase):
    """profile, classify, weights, capacities"""

    def test_round_profile(self):
        """Test: profile --c 1 --samples 64 zawiera narożniki kwadratu"""
        code, out = run("profile", "--c", "1", "--samples", "64")
        self.assertEqual(code, 0)
        lines = out.strip().splitlines()
        self.assertEqual(lines[0], "j,rho1,rho2")
        self.assertEqual(len(lines), 66)
        corner = [float(v) for v in lines[33].split(",")]
        self.assertEqual(corner[0], 0.0)
        self.assertAlmostEqual(corner[1], TWO_PI, places=10)
        self.assertAlmostEqual(corner[2], TWO_PI, places=10)

    def test_profile_json(self):
        """Test: profil w JSON zawiera pole i trójkąt wpisany"""
        code, out = run("profile", "--surface", "round", "--samples", "33", "--format", "json")
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertAlmostEqual(data["area"], 4.0 * math.pi ** 2, places=6)
        self.assertAlmostEqual(data["max_inscribed_triangle"], TWO_PI, places=8)
        self.assertEqual(len(data["samples"]), 33)

    def test_profile_egg(self):
        """Test: profil jaja liczony kwadraturą kończy się kodem 0"""
        code, out = run("profile", "--surface", "egg", "--samples", "33")
        self.assertEqual(code, 0)
        lines = out.strip().splitlines()
        self.assertEqual(lines[0], "j,rho1,rho2")
        self.assertEqual(len(lines), 34)
        self.assertNotIn("nan", out)

    def test_unknown_surface(self):
        """Test: nieznany profil kończy się kodem 2"""
        self.assertEqual(run("profile", "--surface", "torus")[0], 2)
        self.assertEqual(run("profile", "--c", "1", "--samples", "8")[0], 2)
        self.assertEqual(run("profile", "--c", "1", "--surface", "round")[0], 2)

    def test_classify(self):
        """Test: classify --c 1.5 daje weakly_convex"""
        code, out = run("classify", "--c", "1.5", "--samples", "129")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["class"], "weakly_convex")

    def test_weights(self):
        """Test: weights dla sfery okrągłej to (4π; 2π, 2π)"""
        code, out = run("weights", "--c", "1", "--samples", "65")
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertAlmostEqual(data["head"], FOUR_PI, places=9)
        self.assertEqual(len(data["tail"]), 2)

    def test_weights_oblate(self):
        """Test: weights dla c = 0.3 kończy się kodem 2"""
        self.assertEqual(run("weights", "--c", "0.3", "--samples", "65")[0], 2)

    def test_zoll_capacities(self):
        """Test: capacities --ell 2π daje 10 wierszy"""
        code, out = run("capacities", "--ell", repr(TWO_PI))
        self.assertEqual(code, 0)
        lines = out.strip().splitlines()
        self.assertEqual(lines[0], "k,capacity")
        self.assertEqual(len(lines), 11)
        self.assertAlmostEqual(float(lines[-1].split(",")[1]), 12.0 * math.pi, places=9)

    def test_spheroid_capacities(self):
        """Test: capacities --c 2 daje c1 = 4π i c3 = 2β"""
        code, out = run("capacities", "--c", "2", "--format", "json")
        self.assertEqual(code, 0)
        data = json.loads(out)["capacities"]
        self.assertAlmostEqual(data["c1"], FOUR_PI, places=10)
        self.assertIn("c3", data)


class TestOtherCommands(unittest.TestCase):
    """packing, geodesic, version, --out"""

    def test_packing(self):
        """Test: packing --c 1.2 jest poprawnie zweryfikowane"""
        code, out = run("packing", "--c", "1.2")
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertTrue(data["verification"]["ok"])
        self.assertEqual(data["ball"]["label"], "ball")

    def test_packing_outside_range(self):
        """Test: packing --c 0.7 kończy się kodem 2"""
        self.assertEqual(run("packing", "--c", "0.7")[0], 2)

    def test_geodesic_csv(self):
        """Test: geodesic zapisuje trajektorię w CSV"""
        code, out = run("geodesic", "--c", "1.5", "--p-theta", "0.5", "--t-max", "0.5", "--dt", "0.01")
        self.assertEqual(code, 0)
        lines = out.strip().splitlines()
        self.assertEqual(lines[0], "t,z,theta,p_z,p_theta,H,J")
        self.assertEqual(len(lines), 52)

    def test_geodesic_alpha_domain(self):
        """Test: geodesic --alpha --c 0.6 kończy się kodem 2"""
        self.assertEqual(run("geodesic", "--alpha", "--c", "0.6")[0], 2)
        self.assertEqual(run("geodesic", "--c", "1.0")[0], 2)

    def test_version(self):
        """Test: version wypisuje numer wersji"""
        code, out = run("version")
        self.assertEqual(code, 0)
        self.assertEqual(out, f"toricw {__version__}\n")

    def test_no_arguments(self):
        """Test: brak komendy kończy się kodem 2"""
        self.assertEqual(run()[0], 2)

    def test_out_file(self):
        """Test: --out zapisuje wynik do pliku"""
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "width.json"
            code, out = run("width", "--c", "1.5", "--out", str(target))
            self.assertEqual(code, 0)
            self.assertEqual(out, "")
            self.assertEqual(json.loads(target.read_text(encoding="utf-8"))["regime"], "prolate")


if __name__ == "__main__":
    unittest.main()
