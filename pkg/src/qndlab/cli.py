"""Command-line front end.

Subcommands:
  run <config>              full pipeline, CSV/JSON output
  qpd <config> --at VALUE   single-point quasi-probability distribution
  check <config>            invariant and identity suites (exit 1 on failure)
  fig <report> -o PATH      static SVG/PDF figure from an emitted report
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path

from .config import ExperimentConfig, Tolerances, parse_config
from .errors import QndlabError
from .pipeline import evaluate_point, run
from .reporting import emit_csv, emit_figure, emit_json, load_report
from . import __version__


def _add_common_flags(p: argparse.ArgumentParser):
    p.add_argument("--out-dir", default=".", help="output directory (default: cwd)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--tol", type=float, default=None, help="override grouping tolerance")
    p.add_argument("--seed", type=int, default=None, help="override config seed")
    p.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker threads for sweeps (default: QNDLAB_THREADS or 1)",
    )


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("QNDLAB_THREADS")
    return max(1, int(env)) if env else 1


def _load_config(path: str, args) -> ExperimentConfig:
    text = Path(path).read_text(encoding="utf-8")
    config = parse_config(text)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.tol is not None:
        overrides["tolerances"] = Tolerances(
            grouping=args.tol,
            lgi=config.tolerances.lgi,
            mrps=config.tolerances.mrps,
        )
    return dataclasses.replace(config, **overrides) if overrides else config


def _emit(report, config_path: str, args) -> Path:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(config_path).stem
    if args.format == "json":
        return emit_json(report, out_dir / f"{stem}.json")
    return emit_csv(report, out_dir / f"{stem}.csv")


def cmd_run(args) -> int:
    config = _load_config(args.config, args)
    report = run(config, threads=_threads(args))
    path = _emit(report, args.config, args)
    print(f"wrote {path} ({len(report.records)} point(s), {report.wall_time:.2f}s)")
    return 0


def cmd_qpd(args) -> int:
    config = _load_config(args.config, args)
    record = evaluate_point(config, args.at if config.sweep is not None else None)
    print(f"param = {record.param:.10g}  negativity = {record.negativity:.6e}")
    print(f"{'delta':>10} {'weight':>24} kind")
    for delta, weight, kind in record.qpd:
        print(f"{delta:>10.4g} {weight:>24.17g} {kind}")
    return 0


def cmd_check(args) -> int:
    from .checks import check_instance
    from .config import build_instance

    config = _load_config(args.config, args)
    if config.sweep is None:
        params = [None]
    else:
        grid = config.sweep.grid()
        stride = max(1, len(grid) // args.max_points)
        params = list(grid[::stride])
    failures = 0
    for param in params:
        inst = build_instance(config, omega_tau=param)
        for result in check_instance(inst):
            if not result.passed:
                failures += 1
                label = "point" if param is None else f"param={param:.6g}"
                print(
                    f"FAIL {result.name} at {label}: "
                    f"residual {result.residual:.3e} > {result.tolerance:.1e}"
                )
    n_checks = len(params)
    if failures:
        print(f"{failures} check(s) failed over {n_checks} point(s)")
        return 1
    print(f"all checks passed over {n_checks} point(s)")
    return 0


def cmd_fig(args) -> int:
    report = load_report(Path(args.report))
    emit_figure(report, args.output, highlight_params=args.at or None)
    print(f"wrote {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qndlab",
        description="Sequential non-demolition measurement quasi-probabilities "
        "and Leggett-Garg analysis",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the configured point or sweep")
    p.add_argument("config")
    _add_common_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("qpd", help="print the distribution at one parameter value")
    p.add_argument("config")
    p.add_argument("--at", type=float, default=None, help="sweep parameter value")
    _add_common_flags(p)
    p.set_defaults(func=cmd_qpd)

    p = sub.add_parser("check", help="run invariant and identity suites")
    p.add_argument("config")
    p.add_argument(
        "--max-points", type=int, default=25, help="max sweep points to check"
    )
    _add_common_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fig", help="render a figure from an emitted report")
    p.add_argument("report")
    p.add_argument("-o", "--output", required=True)
    p.add_argument(
        "--at",
        type=float,
        action="append",
        help="parameter value(s) for the distribution panels (repeatable)",
    )
    p.set_defaults(func=cmd_fig)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QndlabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
