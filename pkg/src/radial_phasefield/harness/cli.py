"""Command line: ``radial-phasefield <command> [--config F] [--out D] ...``.

Exit codes: 0 success, 1 invalid configuration or arguments, 2 a run aborted.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import ConfigError, ExperimentConfig, config_from_dict, load_config
from .output import CSV_COLUMNS, emit, load_manifest
from .runner import (
    JUMP_COLUMNS,
    TRANSPORT_COLUMNS,
    SweepResult,
    jump_sweep,
    run_single,
    run_sweep,
    validate_transport,
)

EXIT_OK, EXIT_INVALID, EXIT_ABORT = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radial-phasefield",
        description="Radial convective Cahn-Hilliard runs, sweeps and oracle checks.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON config (manifest for 'report')")
    common.add_argument("--out", type=Path, help="output directory (overrides config 'out')")
    common.add_argument("--workers", type=int, help="worker processes for sweeps")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="single run")
    sub.add_parser("sweep", parents=[common], help="grid of (eps, alpha) runs")
    vt = sub.add_parser("validate-transport", parents=[common],
                        help="zero-mobility run against the characteristic solution")
    vt.add_argument("--levels", type=int, default=2, help="number of (h, dt) halvings + 1")
    sub.add_parser("jump-sweep", parents=[common],
                   help="pressure jumps on exact transported profiles, no time stepping")
    sub.add_parser("report", parents=[common], help="re-emit tables from a stored manifest")
    return parser


def _config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else config_from_dict({})
    if args.workers is not None:
        if args.workers < 1:
            raise ConfigError("workers must be >= 1")
        cfg = replace(cfg, workers=args.workers)
    return cfg


def _summary(result: SweepResult) -> None:
    for fit in result.fits:
        kind = fit.get("kind")
        if kind == "skipped":
            print(f"alpha={fit['alpha']}: fits skipped ({fit['reason']})")
        elif "slope" in fit:
            print(f"alpha={fit['alpha']} {kind}: slope {fit['slope']:.4g}")
        elif "ratio_to_young_laplace" in fit:
            print(
                f"{kind} t={fit['t_probe']:g}: ratio {fit['ratio_to_young_laplace']:.5g} "
                f"(kappa {fit['kappa_target']:.5g})"
            )
    for fail in result.failures:
        print(f"FAILED eps={fail['eps']} alpha={fail['alpha']} at {fail['stage']}: "
              f"{fail['message']}", file=sys.stderr)


def _run(args) -> int:
    if args.command == "report":
        if not args.config:
            raise ConfigError("report needs --config <manifest.json>")
        try:
            data = load_manifest(args.config)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read manifest {args.config}: {exc}") from exc
        result = SweepResult(config=data["config"], runs=[], rows=data["rows"],
                             fits=data.get("fits", []), wall_clock=0.0)
        out = args.out or args.config.parent
        emit(result, args.format, out, command=data["command"],
             columns=tuple(data.get("columns", CSV_COLUMNS)))
        print(f"re-emitted {len(result.rows)} rows into {out}")
        return EXIT_OK

    cfg = _config(args)
    out = args.out or Path(cfg.out)
    if args.command == "simulate":
        if cfg.sweep is not None:
            cfg = replace(cfg, sweep=None)
        rep = run_single(cfg)
        result = SweepResult(config=cfg.to_dict(), runs=[rep], rows=rep.rows, fits=[],
                             wall_clock=rep.wall_clock)
        columns = CSV_COLUMNS
    elif args.command == "sweep":
        if cfg.sweep is None:
            raise ConfigError("sweep needs a 'sweep' section with eps and alpha lists")
        result = run_sweep(cfg, workers=cfg.workers)
        columns = CSV_COLUMNS
    elif args.command == "validate-transport":
        if args.levels < 1:
            raise ConfigError("--levels must be >= 1")
        result = validate_transport(cfg, levels=args.levels)
        columns = TRANSPORT_COLUMNS
    else:
        result = jump_sweep(cfg)
        columns = JUMP_COLUMNS

    files = emit(result, args.format, out, command=args.command, columns=columns)
    _summary(result)
    for row in result.rows if args.command == "validate-transport" else ():
        print(f"level {row['level']}: cells {row['cells']}, L2 error {row['d_eps_l2']:.4g}, "
              f"reduction {row['l2_reduction']:.4g}")
    print("wrote " + ", ".join(str(f) for f in files))
    return EXIT_ABORT if result.failures else EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (RuntimeError, FloatingPointError) as exc:
        print(f"run aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
