"""Command-line entry point: ``tile``, ``entropy``, ``crystal`` and ``analyze``.

Exit codes: 0 success, 1 usage or input error, 2 a property check failed.
Every run writes ``run_manifest.json`` next to its outputs.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import platform
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .analysis import ExperimentConfig, concavity_scan, entropy_limit_study, usc_probe
from .cohomology import entropy_profile, load_spec, pigeonhole_lower_bound
from .cohomology.profile import fmt_float
from .crystal import (PairPotential, SolverConfig, build_energy, chain, find_critical_points, grid,
                      spectrum, window_bound)
from .lattice import CubeSequence, cube_of_edge, read_window
from .tiling import check_tiling, quasi_tile

EXIT_OK, EXIT_USAGE, EXIT_PROPERTY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


class Run:
    """Collects outputs of one invocation and writes the manifest."""

    def __init__(self, out: Path, args: argparse.Namespace):
        self.out = out
        self.args = args
        self.files: list[str] = []
        self.summary: dict = {}
        self.t0 = time.perf_counter()
        out.mkdir(parents=True, exist_ok=True)

    def path(self, name: str) -> Path:
        self.files.append(name)
        return self.out / name

    def manifest(self, status: int) -> None:
        params = {k: v for k, v in vars(self.args).items() if k != "func"}
        doc = {
            "subcommand": self.args.command,
            "parameters": params,
            "seed": params.get("seed"),
            "versions": {"artifact": __version__, "python": platform.python_version(),
                         "numpy": np.__version__, "scipy": scipy.__version__},
            "outputs": self.files,
            "summary": self.summary,
            "exit_code": status,
            "wall_time_s": round(time.perf_counter() - self.t0, 3),
        }
        (self.out / "run_manifest.json").write_text(json.dumps(doc, indent=2, default=_jsonable) + "\n")


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (Path,)):
        return str(x)
    return repr(x)


def _json_float(x: float):
    # JSON has no infinities; keep the CSV spelling
    return fmt_float(x) if not math.isfinite(x) else float(x)


# -- tile ------------------------------------------------------------------------

def cmd_tile(args, run: Run) -> int:
    if args.window:
        window = read_window(args.window)
    elif args.cube_edge:
        window = cube_of_edge(args.dim, args.cube_edge)
    else:
        raise UsageError("tile: give --window FILE or --cube-edge E")
    tiles = [cube_of_edge(window.dim, e) for e in args.tile_edge]
    result = quasi_tile(window, tiles, args.eps)
    problems = check_tiling(window, tiles, result)
    with open(run.path("placements.csv"), "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["tile_index"] + [f"center_{k}" for k in range(window.dim)] + ["covered"])
        for p in result.placements:
            w.writerow([p.tile_index, *p.center, len(tiles[p.tile_index])])
    run.summary = {"placements": len(result.placements), "covered": result.covered,
                   "total": result.total, "coverage_ratio": result.coverage_ratio,
                   "eps": args.eps, "failed": result.failed, "problems": problems}
    if args.figures and window.dim == 2:
        from .plotting import plot_tiling
        plot_tiling(window, tiles, result, run.path("tiling.png"))
    print(f"placements={len(result.placements)} covered={result.covered}/{result.total} "
          f"coverage={result.coverage_ratio!r} failed={result.failed}")
    return EXIT_PROPERTY if result.failed or problems else EXIT_OK


# -- entropy ---------------------------------------------------------------------

def cmd_entropy(args, run: Run) -> int:
    spec = load_spec(args.spec)
    if args.mode == "exact" and args.n is None:
        raise UsageError("entropy: --mode exact needs --n")
    profile = entropy_profile(spec, args.grid, args.mode, n=args.n, nu=args.nu, delta=args.delta)
    profile.to_csv(run.path("profile.csv"))
    ell, c, best = profile.argmax()
    run.summary = {"spec": spec.name, "B": spec.B, "max_value": _json_float(best),
                   "argmax": [ell, c], "ln_B": math.log(spec.B)}
    if args.pigeonhole:
        k, r = args.pigeonhole
        n = args.n or 100
        ph = pigeonhole_lower_bound(spec, n, k, r)
        run.summary["pigeonhole"] = {"n": n, "k": k, "r": r, "ell": ph.ell, "c": ph.c,
                                     "bound": ph.bound, "method": ph.method}
    if args.figures:
        from .plotting import plot_profile
        plot_profile(profile, run.path("profile.png"))
    print(f"max b = {fmt_float(best)} at (l, c) = ({ell!r}, {c!r})")
    return EXIT_OK


# -- crystal ---------------------------------------------------------------------

def cmd_crystal(args, run: Run) -> int:
    if args.grid_size:
        window = grid(*args.grid_size)
    else:
        window = chain(args.chain)
    a0, a1, b1, a2 = args.V
    potential = PairPotential(a0, a1, b1, a2, args.K)
    energy = build_energy(window, potential)
    cfg = SolverConfig(starts=args.starts, seed=args.seed, tol=args.tol, max_sites=args.max_sites)
    points = find_critical_points(energy, cfg)
    hist = spectrum(points, energy.n)
    with open(run.path("points.csv"), "w", newline="") as fh:
        w = _writer(fh)
        w.writerow([f"theta_{k}" for k in range(energy.n)] + ["value", "index"])
        for p in points:
            w.writerow([*map(fmt_float, p.angles), fmt_float(p.value), p.morse_index])
    with open(run.path("spectrum.csv"), "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["value", "multiplicity"])
        for v, m in hist.entries:
            w.writerow([fmt_float(v), m])
    spec = load_spec(args.spec)
    row, checks = window_bound(spec, energy, points, tuple(args.interval), args.distinct_values)
    failed_levels = [c for c in checks if not c.ok]
    run.summary = {
        "n": energy.n, "edges": len(energy.edges), "K": args.K,
        "points": len(points), "dropped_starts": points.dropped, "starts": points.n_starts,
        "euler_sum": points.euler_sum, "complete_heuristic": row.complete,
        "interval": list(args.interval), "count_in_interval": row.crit_count,
        "cri": _json_float(row.cri), "cohomology_count": row.coh_count, "b_A": _json_float(row.b_A),
        "margin": _json_float(row.margin), "violation": row.violation,
        "level_check_failures": len(failed_levels),
        "f_range": list(energy.normalized_range()),
    }
    if args.figures:
        from .plotting import plot_spectrum
        plot_spectrum(hist, run.path("spectrum.png"), tuple(args.interval))
    print(json.dumps(run.summary, indent=2))
    return EXIT_PROPERTY if row.violation or failed_levels else EXIT_OK


# -- analyze ---------------------------------------------------------------------

def cmd_analyze(args, run: Run) -> int:
    cfg = ExperimentConfig.read(args.config)
    spec = load_spec(cfg.spec)
    seq = CubeSequence(cfg.dim)
    ok = True
    if "limit" in cfg.studies:
        all_rows = []
        with open(run.path("limit.csv"), "w", newline="") as fh:
            w = _writer(fh)
            w.writerow(["nu", "delta", "i", "n", "log_count", "rate", "certificate", "target"])
            for nu, delta in zip(cfg.nu_schedule, cfg.delta_schedule):
                rows = entropy_limit_study(spec, seq, cfg.ell, nu, cfg.c, delta, cfg.i_max, cfg.i_min)
                all_rows.append(rows)
                for r in rows:
                    w.writerow([fmt_float(nu), fmt_float(delta), r.i, r.n, fmt_float(r.log_count),
                                fmt_float(r.rate), fmt_float(r.certificate), fmt_float(r.target)])
        run.summary["limit_final_rate"] = [_json_float(rows[-1].rate) for rows in all_rows]
        if args.figures:
            from .plotting import plot_limit
            plot_limit(all_rows[-1], run.path("limit.png"))
    profile = None
    if {"concavity", "usc"} & set(cfg.studies):
        profile = entropy_profile(spec, cfg.resolution, "asymptotic")
    if "concavity" in cfg.studies:
        rep = concavity_scan(profile, cfg.segments, cfg.seed, dyadic=20, dyadic_n=cfg.dyadic_n)
        with open(run.path("concavity.csv"), "w", newline="") as fh:
            w = _writer(fh)
            w.writerow(["l_start", "c_start", "l_end", "c_end", "v_start", "v_end", "v_mid"])
            for f in rep.failures:
                w.writerow([*map(fmt_float, (*f.start, *f.end, *f.values))])
        run.summary["concavity"] = {"segments": rep.checked, "failures": len(rep.failures),
                                    "dyadic_checked": rep.dyadic_checked,
                                    "dyadic_failures": len(rep.dyadic_failures)}
        ok &= rep.passed
    if "usc" in cfg.studies:
        with open(run.path("usc.csv"), "w", newline="") as fh:
            w = _writer(fh)
            w.writerow(["ell", "c", "value", "limsup", "passed"])
            usc_ok = True
            for pt in [(cfg.ell, cfg.c), (0.0, 1.0), (float(spec.m), 0.0)]:
                rep = usc_probe(profile, pt, seed=cfg.seed)
                w.writerow([fmt_float(pt[0]), fmt_float(pt[1]), fmt_float(rep.value),
                            fmt_float(rep.limsup), int(rep.passed)])
                usc_ok &= rep.passed
        run.summary["usc_passed"] = usc_ok
        ok &= usc_ok
    print(json.dumps(run.summary, indent=2))
    return EXIT_OK if ok else EXIT_PROPERTY


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dynmorse", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def common(p):
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument("--figures", action="store_true", help="also render PNG figures (matplotlib)")

    p = sub.add_parser("tile", help="quasi-tile a window by cubes")
    p.add_argument("--window", help="window file ('d=<dim>' then one point per line)")
    p.add_argument("--cube-edge", type=int, help="tile the cube [0, E-1]^d instead of a file")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--tile-edge", type=int, action="append", required=True,
                   help="cube tile edge (repeatable)")
    p.add_argument("--eps", type=float, required=True)
    common(p)
    p.set_defaults(func=cmd_tile)

    p = sub.add_parser("entropy", help="sample the entropy profile of a spec")
    p.add_argument("--spec", required=True, help="builtin name (s1, torus, point) or spec file")
    p.add_argument("--mode", choices=["asymptotic", "exact"], default="asymptotic")
    p.add_argument("--grid", type=int, default=21, help="grid resolution per axis")
    p.add_argument("--n", type=int, help="window size for --mode exact")
    p.add_argument("--nu", type=float, default=0.05)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--pigeonhole", type=int, nargs=2, metavar=("K", "R"),
                   help="also report the pigeonhole bound with K level and R degree slices")
    common(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("crystal", help="enumerate critical points of a windowed crystal energy")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--chain", type=int, help="chain of N sites")
    g.add_argument("--grid-size", type=int, nargs=2, metavar=("ROWS", "COLS"))
    p.add_argument("--K", type=float, default=0.0, help="coupling strength")
    p.add_argument("--V", type=float, nargs=4, default=[0.5, -0.5, 0.0, 0.0],
                   metavar=("A0", "A1", "B1", "A2"), help="V = a0 + a1 cos t + b1 sin t + a2 cos 2t")
    p.add_argument("--interval", type=float, nargs=2, default=[0.45, 0.55], metavar=("A", "B"))
    p.add_argument("--spec", default="s1", help="cohomology spec matching V")
    p.add_argument("--starts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-sites", type=int, default=12)
    p.add_argument("--distinct-values", action="store_true",
                   help="count distinct critical values instead of critical points")
    common(p)
    p.set_defaults(func=cmd_crystal)

    p = sub.add_parser("analyze", help="run the studies of an experiment config")
    p.add_argument("--config", required=True, help="key = value config file")
    common(p)
    p.set_defaults(func=cmd_analyze)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    run_ = Run(args.out, args)
    try:
        status = args.func(args, run_)
    except (UsageError, ValueError, OSError) as exc:
        print(f"dynmorse {args.command}: {exc}", file=sys.stderr)
        status = EXIT_USAGE
    run_.manifest(status)
    return status


def main() -> None:
    sys.exit(run())
