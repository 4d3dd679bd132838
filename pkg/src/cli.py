"""toricw command line: CSV/JSON data for widths, profiles, capacities and packings.

Exit codes: 0 success, 2 usage or domain error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import __description__, __version__
from .action_profile import (
    ToricProfile,
    boundary_curve,
    classify,
    max_inscribed_triangle,
    profile_area,
)
from .config import get_settings, override_settings
from .ech import spheroid_capacity, zoll_capacities
from .errors import DomainError, IndeterminateError, NumericalError, ToricWidthError
from .geodesic import CSV_HEADER, closed_geodesic_alpha, flow, launch_state
from .packing import build_prolate_packing, verify_packing, weight_sequence
from .spheroid_widths import beta, c0, spheroid_toric_profile, width
from .surface import SurfaceProfile, named_profile, spheroid_profile

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("width", "sweep", "profile", "capacities", "weights", "packing", "geodesic", "classify", "version")
SWEEP_HEADER = ("c", "width", "alpha", "beta", "c1", "c3")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


@dataclass
class CommandSpec:
    """A parsed subcommand: typed parameters, output target and format."""

    subcommand: str
    parameters: Dict[str, object] = field(default_factory=dict)
    output: Optional[str] = None
    format: Optional[str] = None

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "CommandSpec":
        common = {"command", "out", "format", "tol", "log_level", "workers"}
        params = {k: v for k, v in vars(args).items() if k not in common}
        return cls(args.command, params, args.out, args.format)

    def get(self, name: str, default: object = None) -> object:
        value = self.parameters.get(name)
        return default if value is None else value


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------

def _round(value: object) -> object:
    if isinstance(value, float):
        return value if not math.isfinite(value) else float(f"{value:.12g}")
    if isinstance(value, (np.floating, np.integer)):
        return _round(value.item())
    if isinstance(value, dict):
        return {k: _round(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round(v) for v in value]
    return value


def to_json(data: object) -> str:
    return json.dumps(_round(data), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def to_csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    lines = [",".join(header)]
    lines += [",".join(_cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _table(spec: CommandSpec, default: str, header: Sequence[str], rows, data: object) -> str:
    return to_csv(header, rows) if (spec.format or default) == "csv" else to_json(data)


def _profile_table(spec: CommandSpec, t: ToricProfile, data: Dict[str, object]) -> str:
    if (spec.format or "csv") == "csv":
        return t.to_csv()
    data["samples"] = [{"j": j, "rho1": a, "rho2": b} for j, a, b in t.samples]
    return to_json(data)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _positive_c(spec: CommandSpec) -> float:
    c = spec.get("c")
    if c is None:
        raise DomainError(f"{spec.subcommand}: --c is required")
    if not c > 0 or not math.isfinite(c):
        raise DomainError(f"{spec.subcommand}: c must be a positive number, got {c}")
    return float(c)


def _surface_or_c(spec: CommandSpec) -> SurfaceProfile:
    if spec.get("surface") is not None and spec.get("c") is not None:
        raise DomainError(f"{spec.subcommand}: give either --c or --surface, not both")
    if spec.get("surface") is not None:
        return named_profile(str(spec.get("surface")))
    return spheroid_profile(_positive_c(spec))


def _toric(spec: CommandSpec) -> ToricProfile:
    samples = int(spec.get("samples", get_settings().samples))
    if samples < 16:
        raise DomainError(f"{spec.subcommand}: --samples must be at least 16, got {samples}")
    if spec.get("surface") is not None:
        return boundary_curve(_surface_or_c(spec), samples)
    return spheroid_toric_profile(_positive_c(spec), samples)


def run_width(spec: CommandSpec) -> str:
    report = width(_positive_c(spec))
    data = report.to_dict()
    keys = sorted(data)
    return _table(spec, "json", keys, [[data[k] for k in keys]], data)


def sweep_row(c: float) -> List[object]:
    report = width(c)
    return [c, report.width, report.alpha, report.beta, report.c1, report.c3]


def run_sweep(spec: CommandSpec) -> str:
    c_min, c_max, n = spec.get("c_min"), spec.get("c_max"), spec.get("n")
    if c_min is None or c_max is None or n is None:
        raise DomainError("sweep: --c-min, --c-max and --n are required")
    if not (0 < c_min < c_max and math.isfinite(c_max)) or n < 2:
        raise DomainError(f"sweep: need 0 < c_min < c_max and n >= 2, got {c_min}, {c_max}, {n}")
    grid = [float(c) for c in np.linspace(c_min, c_max, int(n))]
    workers = get_settings().workers
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(sweep_row, grid))
    else:
        rows = [sweep_row(c) for c in grid]
    logger.info(f"✅ sweep: {len(rows)} rows on [{c_min:g}, {c_max:g}]")
    data = [dict(zip(SWEEP_HEADER, row)) for row in rows]
    return _table(spec, "csv", SWEEP_HEADER, rows, data)


def run_profile(spec: CommandSpec) -> str:
    t = _toric(spec)
    data = {
        "equator_length": t.equator_length,
        "meridian_length": t.meridian_length,
        "max_inscribed_triangle": max_inscribed_triangle(t),
        "area": profile_area(t),
    }
    return _profile_table(spec, t, data)


def run_capacities(spec: CommandSpec) -> str:
    k = spec.get("k")
    ell = spec.get("ell")
    if ell is not None:
        if spec.get("c") is not None:
            raise DomainError("capacities: give either --ell or --c, not both")
        k_max = 9 if k is None else int(k)
        values = zoll_capacities(float(ell), k_max)
        rows = [[index, value] for index, value in enumerate(values)]
        data = {"ell": ell, "capacities": values}
        return _table(spec, "csv", ("k", "capacity"), rows, data)

    c = _positive_c(spec)
    indices = [int(k)] if k is not None else [i for i in (1, 3) if (i == 1 and c >= 1.0) or (i == 3 and c < c0())]
    rows = [[i, spheroid_capacity(c, i)] for i in indices]
    data = {"c": c, "capacities": {f"c{i}": value for i, value in rows}}
    return _table(spec, "csv", ("k", "capacity"), rows, data)


def run_weights(spec: CommandSpec) -> str:
    ws = weight_sequence(_toric(spec), spec.get("depth"))
    rows = [[i, w] for i, w in enumerate(ws.weights)]
    return _table(spec, "json", ("index", "weight"), rows, ws.to_dict())


def run_packing(spec: CommandSpec) -> str:
    c = _positive_c(spec)
    packing = build_prolate_packing(c, spec.get("depth"))
    report = verify_packing(packing, beta(c))
    data = packing.to_dict()
    data["verification"] = report.to_dict()
    pieces = ([packing.ball] if packing.ball is not None else []) + list(packing.pieces)
    rows = [[p.label, p.size] + p.vertices().ravel().tolist() for p in pieces]
    header = ("label", "size", "x1", "y1", "x2", "y2", "x3", "y3")
    return _table(spec, "json", header, rows, data)


def run_geodesic(spec: CommandSpec) -> str:
    if spec.get("alpha"):
        result = closed_geodesic_alpha(_positive_c(spec))
        data = result.to_dict()
        keys = sorted(data)
        return _table(spec, "json", keys, [[data[k] for k in keys]], data)

    p = _surface_or_c(spec)
    z = float(spec.get("z", p.z0))
    p_theta = spec.get("p_theta")
    if p_theta is None:
        raise DomainError("geodesic: --p-theta is required unless --alpha is given")
    t_max, dt = float(spec.get("t_max", 10.0)), float(spec.get("dt", 1e-3))
    track = flow(p, launch_state(p, z, float(p_theta)), t_max, dt)
    if (spec.format or "csv") == "csv":
        return track.to_csv()
    heights = track.turning_heights()
    return to_json({
        "length": track.length,
        "h_drift": track.h_drift,
        "j_drift": track.j_drift,
        "z_max": heights["max"].tolist(),
        "z_min": heights["min"].tolist(),
        "steps": len(track.times) - 1,
    })


def run_classify(spec: CommandSpec) -> str:
    t = _toric(spec)
    kind = classify(t).value
    data = {"class": kind, "source": spec.get("surface") or spec.get("c")}
    return _table(spec, "json", ("source", "class"), [[data["source"], kind]], data)


def run_version(spec: CommandSpec) -> str:
    return f"toricw {__version__}\n"


RUNNERS: Dict[str, Callable[[CommandSpec], str]] = {
    "width": run_width,
    "sweep": run_sweep,
    "profile": run_profile,
    "capacities": run_capacities,
    "weights": run_weights,
    "packing": run_packing,
    "geodesic": run_geodesic,
    "classify": run_classify,
    "version": run_version,
}


# ---------------------------------------------------------------------------
# parser and entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None, help="output format")
    common.add_argument("--out", default=None, metavar="PATH", help="write to PATH instead of stdout")
    common.add_argument("--tol", type=float, default=None, help="quadrature tolerance override")
    common.add_argument("--log-level", default=None, choices=("DEBUG", "INFO", "WARNING", "ERROR"))
    common.add_argument("--workers", type=int, default=None, help="thread pool size")

    parser = argparse.ArgumentParser(prog="toricw", description=__description__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text)

    p = command("width", "Gromov width of D*E(1,1,c)")
    p.add_argument("--c", type=float)

    p = command("sweep", "width table over a range of c")
    p.add_argument("--c-min", type=float)
    p.add_argument("--c-max", type=float)
    p.add_argument("--n", type=int, default=100)

    for name, help_text in (("profile", "boundary samples of Ω"), ("classify", "concave / weakly convex / neither")):
        p = command(name, help_text)
        p.add_argument("--c", type=float)
        p.add_argument("--surface", help="round, egg[:eps] or spheroid:<c>")
        p.add_argument("--samples", type=int)

    p = command("capacities", "ECH capacities of a Zoll domain (--ell) or of a spheroid (--c)")
    p.add_argument("--ell", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--k", type=int)

    p = command("weights", "weight sequence of a weakly convex Ω")
    p.add_argument("--c", type=float)
    p.add_argument("--surface")
    p.add_argument("--samples", type=int)
    p.add_argument("--depth", type=int)

    p = command("packing", "ball packing of a prolate spheroid and its verification")
    p.add_argument("--c", type=float)
    p.add_argument("--depth", type=int)

    p = command("geodesic", "integrate a geodesic or shoot the α(c) geodesic")
    p.add_argument("--c", type=float)
    p.add_argument("--surface")
    p.add_argument("--alpha", action="store_true", help="closed geodesic of length α(c), c < 1/2")
    p.add_argument("--z", type=float)
    p.add_argument("--p-theta", type=float)
    p.add_argument("--t-max", type=float)
    p.add_argument("--dt", type=float)

    command("version", "print the version")
    return parser


def _setup_logging(level: Optional[str]) -> None:
    logging.basicConfig(
        level=getattr(logging, (level or get_settings().log_level).upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(out).write_text(text, encoding="utf-8")
    logger.info(f"✅ Wrote {out}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        _setup_logging(args.log_level)
        spec = CommandSpec.from_namespace(args)
        with override_settings(quad_tol=args.tol, workers=args.workers, log_level=args.log_level):
            text = RUNNERS[spec.subcommand](spec)
        _write(text, spec.output)
        return EXIT_OK
    except (NumericalError, IndeterminateError) as e:
        logger.error(f"❌ {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ToricWidthError, OSError) as e:
        logger.error(f"❌ {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
