"""Command-line interface.

Unit conversions happen here only: speeds are given in km/h and axle
loads in tonnes; the library works in SI units.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from .calibration import DEFAULT_K, DEFAULT_TOLERANCE, recommended_dt, resolve_workers, run_study
from .config import load_config
from .exceptions import BridgeStepError
from .metrics import impact_factor
from .plotting import write_impact_charts
from .solver import solve_case
from .static import max_static_sweep
from .structural import GRAVITY, MAX_MODE_COUNT, AnalysisCase, BridgeSpec, TrainSpec
from .tables import (
    calibrate_file,
    fmt,
    read_results,
    select_from_rows,
    write_history,
    write_json,
    write_results,
    write_selection,
)

logger = logging.getLogger("bridgestep")


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}") from None
    if not value > 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def ratio(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}") from None
    if not 0 <= value < 1:
        raise argparse.ArgumentTypeError(f"must be in [0, 1), got {text}")
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def mode_count(text: str) -> int:
    value = positive_int(text)
    if value > MAX_MODE_COUNT:
        raise argparse.ArgumentTypeError(f"must be <= {MAX_MODE_COUNT}, got {text}")
    return value


def cmd_analyze(args) -> int:
    bridge = BridgeSpec(args.span, args.f1, args.damping, args.modes, args.mass)
    train = TrainSpec(args.axle_load_ton * 1000.0 * GRAVITY, args.axles, args.axle_distance)
    case = AnalysisCase(bridge, train, args.speed_kmh / 3.6, args.dt)
    history = solve_case(case, keep_modes=args.history is not None)
    d_st = max_static_sweep(bridge, train).max_midpoint_deflection_m
    d_dyn = history.max_abs_deflection_m
    value = impact_factor(d_dyn, d_st)
    if args.history is not None:
        write_history(args.history, history)
    print(f"span_m={fmt(args.span)} speed_kmh={fmt(args.speed_kmh)} dt_s={fmt(args.dt)} "
          f"D_dyn_m={fmt(d_dyn)} D_st_m={fmt(d_st)} IF={value:.5f}")
    return 0


def _prepare_out_dir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    if not path.is_dir() or not os.access(path, os.W_OK):
        raise BridgeStepError(f"output directory {path} is not writable")
    return path


def cmd_sweep(args) -> int:
    config = load_config(args.config)
    grid = config.to_grid()
    workers = args.workers if args.workers is not None else config.workers
    workers = resolve_workers(workers)
    out_dir = _prepare_out_dir(Path(args.out or config.output_dir))

    start = time.perf_counter()
    result = run_study(grid, workers=workers)
    wall = time.perf_counter() - start

    write_results(out_dir / "results.csv", result.records)
    manifest = {
        "version": __version__,
        "config_path": str(args.config),
        "config_hash": config.config_hash(),
        "resolved_config": config.data,
        "defaults_used": config.defaults_used,
        "workers": workers,
        "record_count": len(result.records),
        "condition_count": len(result.report.selections) + len(result.report.flagged_conditions),
        "failed_cases": [
            {"span_m": k[0], "axle_distance_m": k[1], "speed_kmh": k[2] * 3.6, "dt_s": k[3], "error": msg}
            for k, msg in result.failures
        ],
        "wall_time_s": wall,
    }
    write_json(out_dir / "manifest.json", manifest)
    print(f"{len(result.records)} result rows, {len(result.failures)} failed case(s) -> {out_dir}")
    return 0


def cmd_select_dt(args) -> int:
    rows = read_results(args.input)
    selected = select_from_rows(rows, args.tol)
    write_selection(args.out, selected)
    flagged = sum(sel is None for _, sel in selected)
    print(f"{len(selected) - flagged} condition(s) selected, {flagged} flagged -> {args.out}")
    return 0


def cmd_calibrate(args) -> int:
    summary = calibrate_file(args.input)
    out = Path(args.out) if args.out else Path(args.input).with_name("summary.json")
    write_json(out, summary)
    for b in summary["bridges"]:
        print(f"span_m={fmt(b['span_m'])} k_min={b['k_min']:.4f} k_mean={b['k_mean']:.4f} "
              f"k_std={b['k_std']:.4f} n={b['count']}")
    print(f"global_k_min={summary['global_k_min']:.4f} -> {out}")
    return 0


def cmd_recommend(args) -> int:
    print(f"{recommended_dt(args.span, args.speed_kmh / 3.6, args.k):.6g}")
    return 0


def cmd_plot(args) -> int:
    written = write_impact_charts(read_results(args.input), args.out)
    if not written:
        print("warning: no results to plot", file=sys.stderr)
    else:
        print(f"{len(written)} file(s) -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bridgestep", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="one dynamic run and its impact factor")
    p.add_argument("--span", type=positive_float, required=True, help="span length (m)")
    p.add_argument("--f1", type=positive_float, required=True, help="first natural frequency (Hz)")
    p.add_argument("--damping", type=ratio, default=0.0, help="modal damping ratio")
    p.add_argument("--modes", type=mode_count, default=5, help="retained modes")
    p.add_argument("--mass", type=positive_float, default=1000.0, help="mass per length (kg/m)")
    p.add_argument("--axle-load-ton", type=positive_float, default=20.0)
    p.add_argument("--axles", type=positive_int, default=10)
    p.add_argument("--axle-distance", type=positive_float, default=13.0, help="axle spacing (m)")
    p.add_argument("--speed-kmh", type=positive_float, required=True)
    p.add_argument("--dt", type=positive_float, required=True, help="time step (s)")
    p.add_argument("--history", type=Path, help="write the time series to this CSV")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="run a configured parameter study")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--out", type=Path, help="output directory (default: config output_dir)")
    p.add_argument("--workers", type=positive_int,
                   help="worker processes (default: config, then $BRIDGESTEP_WORKERS, then CPU count)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("select-dt", help="choose the proper time step per condition")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--tol", type=positive_float, default=DEFAULT_TOLERANCE)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_select_dt)

    p = sub.add_parser("calibrate", help="k statistics from a selection file")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--out", type=Path, help="summary path (default: summary.json next to input)")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("recommend", help="recommended time step k L / V")
    p.add_argument("--span", type=positive_float, required=True)
    p.add_argument("--speed-kmh", type=positive_float, required=True)
    p.add_argument("--k", type=positive_float, default=DEFAULT_K)
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("plot", help="impact factor charts per span and axle distance")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (BridgeStepError, OSError) as exc:
        print(f"bridgestep {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
