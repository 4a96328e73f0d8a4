"""Command-line entry point for convergence studies.

Exit codes: 0 success, 1 configuration error, 2 solver failure,
3 coefficient-property-suite failure.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError, FracCDRError
from .harness import StudyConfig, emit_csv, emit_plot, load_config_file, parse_levels, run_study
from .weights import FractionalParams, coefficient_inequality_report


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fraccdr")
    sub = ap.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run a convergence study")
    runp.add_argument("--problem", required=True,
                      help="example1, example2, or a problem config file")
    runp.add_argument("--lambda", dest="lam", type=float, required=True,
                      help="fractional order in (0, 1)")
    runp.add_argument("--levels", required=True,
                      help="space refinement exponents, e.g. 3..6 or 3,4,5")
    mode = runp.add_mutually_exclusive_group()
    mode.add_argument("--couple-time", action="store_true", default=True,
                      help="k = h**(4/(2-lambda/2)) (default)")
    mode.add_argument("--k", dest="k_list",
                      help="comma-separated explicit time steps, one per level")
    runp.add_argument("--norm", choices=["l2_l2", "linf_l2"], default=None,
                      help="reported error norm (default l2_l2)")
    runp.add_argument("--out-csv", help="CSV report path")
    runp.add_argument("--out-svg", help="SVG plot path")
    runp.add_argument("--stop-below", type=float, default=None,
                      help="stop refining once the error drops below this")
    runp.add_argument("--check-properties", action="store_true",
                      help="run the coefficient-inequality suite for this lambda")
    return ap


def _run_properties(lam: float) -> bool:
    if lam >= 2.0 / 3.0:
        print(f"property suite skipped: lambda={lam} >= 2/3 (outside the "
              "hypothesis of the coefficient inequalities)")
        return True
    report = coefficient_inequality_report(FractionalParams(lam))
    ok = True
    for name, passed in report.items():
        print(f"{name}: {'pass' if passed else 'FAIL'}")
        ok &= passed
    return ok


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; those are configuration errors
        # here (exit code 2 is reserved for solver failures)
        return 0 if exc.code in (0, None) else 1
    try:
        if not 0.0 < args.lam < 1.0:
            raise ConfigError(f"lambda must be in (0, 1), got {args.lam}")
        levels = parse_levels(args.levels)
        k_list = None
        if args.k_list:
            k_list = [float(tok) for tok in args.k_list.split(",") if tok.strip()]
        # config files may preset study fields; CLI flags win
        if args.problem not in ("example1", "example2"):
            entries = load_config_file(args.problem)
            args.out_csv = args.out_csv or entries.get("out_csv")
            args.out_svg = args.out_svg or entries.get("out_svg")
            args.norm = args.norm or entries.get("norm")
            if args.stop_below is None and "stop_below" in entries:
                args.stop_below = float(entries["stop_below"])
        cfg = StudyConfig(
            problem=args.problem,
            lam=args.lam,
            levels=levels,
            couple_time=k_list is None,
            k_list=k_list,
            norm=args.norm or "l2_l2",
            out_csv=args.out_csv,
            out_svg=args.out_svg,
            check_properties=args.check_properties,
            stop_below=args.stop_below,
        )
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    if cfg.check_properties:
        if not _run_properties(cfg.lam):
            return 3

    try:
        report = run_study(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except FracCDRError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2

    hdr = f"{'h':>12} {'k':>12} {'error':>12} {'rate':>8}"
    print(hdr)
    failed = False
    for r in report.rows:
        if r.failure:
            failed = True
            print(f"{r.h:12.5e} {r.k:12.5e}  FAILED: {r.failure}")
        else:
            rate = f"{r.rate:8.4f}" if r.rate is not None else "      --"
            print(f"{r.h:12.5e} {r.k:12.5e} {r.error:12.5e} {rate}")
    try:
        if cfg.out_csv:
            emit_csv(report, cfg.out_csv)
            print(f"wrote {cfg.out_csv}")
        if cfg.out_svg:
            emit_plot(report, cfg.out_svg)
            print(f"wrote {cfg.out_svg}")
    except FracCDRError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return 1
    return 2 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
