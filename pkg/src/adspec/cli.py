"""Command line interface: ``adspec {test,simulate,critical-values,reproduce-table}``.

Exit codes for ``test``: 0 when H0 is not rejected, 1 when it is, 2 on any
error (including bad flags).  Other subcommands return 0 or 2.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from . import __version__
from .errors import AdspecError
from .harness import load_csv, reproduce_table, write_csv
from .models import MODEL_IDS, READINGS, ModelSpec, load_custom_model, simulate
from .nulldist import blocked_quantile
from .testkit import BLOCKED, STATIONARY, TestConfig, run_test

EXIT_ACCEPT = 0
EXIT_REJECT = 1
EXIT_ERROR = 2


def _format_result(res) -> str:
    lines = [
        f"test           : {res.kind}",
        f"T              : {res.T}",
        f"L              : {res.L}",
    ]
    if res.kind == BLOCKED:
        lines += [f"B              : {res.B}", f"M              : {res.M}"]
        stats = ", ".join(f"{s:.6f}" for s in res.block_statistics)
        lines.append(f"block stats    : {stats}")
    lines += [
        f"statistic      : {res.statistic:.6f}",
        f"critical value : {res.critical_value:.6f} (alpha = {res.alpha:g})",
        f"p-value        : {res.p_value:.6g}",
        f"decision       : {'reject' if res.reject else 'do not reject'} equal spectra",
    ]
    return "\n".join(lines)


def cmd_test(args) -> int:
    data = load_csv(args.csv)
    config = TestConfig(alpha=args.alpha, L=args.L, B=args.B, M=args.M,
                        demean=not args.no_demean)
    res = run_test(data, config, args.mode)
    if args.json:
        print(json.dumps(res.to_dict(), indent=2))
    else:
        print(_format_result(res))
    return EXIT_REJECT if res.reject else EXIT_ACCEPT


def _model_spec(args) -> ModelSpec:
    name = args.model
    if name.upper() in MODEL_IDS:
        rho = 0.5 if args.rho is None else args.rho
        return ModelSpec(name.upper(), args.T, rho, reading=args.reading)
    custom, extras = load_custom_model(name)
    rho = args.rho if args.rho is not None else extras.get("rho", 0.5)
    return ModelSpec("CUSTOM", args.T, rho, custom=custom)


def cmd_simulate(args) -> int:
    data = simulate(_model_spec(args), args.seed)
    if args.out == "-":
        write_csv(sys.stdout, data)
    else:
        write_csv(args.out, data)
    return 0


def cmd_critical_values(args) -> int:
    print(f"{'alpha':>8} {'B':>4} {'kappa':>12}")
    for B in args.B:
        for alpha in args.alpha:
            cv = blocked_quantile(alpha, B)
            print(f"{cv.alpha:>8g} {cv.B:>4d} {cv.value:>12.6f}")
    return 0


def cmd_reproduce(args) -> int:
    report = reproduce_table(args.table, args.reps, args.seed, workers=args.workers)
    if args.json:
        payload = {
            "table": report.table,
            "replications": report.replications,
            "base_seed": report.base_seed,
            "pass_fraction": report.pass_fraction,
            "cells": report.rows(),
        }
        print(json.dumps(payload, indent=2))
    else:
        print(report.format())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adspec",
        description="Anderson-Darling tests for equal spectra of two time series.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="test equality of spectra for a two-column CSV")
    p.add_argument("csv", help="CSV with two numeric columns (optional header x1,x2)")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--mode", choices=(STATIONARY, BLOCKED), default=STATIONARY)
    p.add_argument("--L", type=int, default=None, help="number of periodogram ratios")
    p.add_argument("--B", type=int, default=None, help="number of blocks (blocked mode)")
    p.add_argument("--M", type=int, default=None, help="block length, even (blocked mode)")
    p.add_argument("--no-demean", action="store_true", help="skip mean removal")
    p.add_argument("--json", action="store_true", help="print the result as JSON")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("simulate", help="simulate a model and write a CSV")
    p.add_argument("--model", required=True,
                   help="model letter A..R or a key/value custom-model file")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--rho", type=float, default=None,
                   help="innovation correlation (default 0.5)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path, '-' for stdout")
    p.add_argument("--reading", choices=READINGS, default="default",
                   help="cross-channel reading of Models I and O")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("critical-values", help="print null quantiles kappa(alpha, B)")
    p.add_argument("--alpha", type=float, nargs="+", default=[0.05, 0.10, 0.15])
    p.add_argument("--B", type=int, nargs="+", default=[1])
    p.set_defaults(func=cmd_critical_values)

    p = sub.add_parser("reproduce-table", help="Monte Carlo reproduction of Tables 1-4")
    p.add_argument("--table", type=int, choices=(1, 2, 3, 4), required=True)
    p.add_argument("--reps", type=int, default=1000,
                   help="replications per cell; 200 gives a quick check with wider gates")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: $ADSPEC_WORKERS or 1)")
    p.add_argument("--json", action="store_true", help="print machine-readable rows")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help/--version
        return int(exc.code) if exc.code is not None else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (AdspecError, ValueError, OSError) as exc:
        print(f"adspec: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
