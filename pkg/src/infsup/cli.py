"""Command line entry point: ``infsup {sweep,check,plot}``.

Exit codes: 0 success, 1 check failure or every case failed, 2 usage or
configuration error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import ConfigError
from .plotting import render_plot
from .sweep import SweepConfig, check_against_paper, default_jobs, read_csv, run_sweep, write_csv

log = logging.getLogger("infsup")


def _common(jobs_default: int) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--L", type=float, nargs="+", default=[1.0, 2.0], metavar="L",
                   help="domain edge lengths, Omega = [0,L]^2 (default: 1 2)")
    p.add_argument("--degrees", type=int, nargs="+", default=[1, 2, 3], metavar="N",
                   help="polynomial degrees (default: 1 2 3)")
    p.add_argument("--refinements", type=int, nargs="+", default=[2, 4, 8, 16, 32, 64],
                   metavar="K", help="elements per direction, h = 1/K (default: 2 4 ... 64)")
    p.add_argument("--mode", choices=["kperp", "hdiv"], default="kperp",
                   help="velocity norm: ||div u|| on K-perp, or full H(div) (default: kperp)")
    p.add_argument("--out", type=Path, default=None, help="CSV output path")
    p.add_argument("--plot-out", type=Path, default=None, help="SVG output path")
    p.add_argument("--rank-tol-factor", type=float, default=64.0,
                   help="rank cutoff is dim * eps * factor * largest value (default: 64)")
    p.add_argument("--max-dofs", type=int, default=10000,
                   help="skip cases with more flux DOFs than this (default: 10000)")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check with the eigenpencil oracle (cases with n_u <= 2000)")
    p.add_argument("--jobs", type=int, default=jobs_default,
                   help="worker processes (default: $INFSUP_JOBS or 1)")
    p.add_argument("--timings", action="store_true",
                   help="fill the elapsed_ms CSV column (makes output run-dependent)")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    return p


def build_parser() -> argparse.ArgumentParser:
    try:
        jobs = default_jobs()
    except ConfigError:
        jobs = 1
    common = _common(jobs)
    parser = argparse.ArgumentParser(
        prog="infsup",
        description="Discrete inf-sup constant of (p, div u) on square spectral-element meshes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common], help="compute beta_h over a parameter sweep")
    sub.add_parser("check", parents=[common],
                   help="sweep and compare against the published tables (tolerance 1e-6)")
    plot = sub.add_parser("plot", parents=[common], help="render beta_h against h as SVG")
    plot.add_argument("--from-csv", type=Path, default=None,
                      help="plot an existing sweep CSV instead of recomputing")
    return parser


def _config(args) -> SweepConfig:
    return SweepConfig(
        L=args.L, degrees=args.degrees, refinements=args.refinements, mode=args.mode,
        tol_factor=args.rank_tol_factor, max_dofs=args.max_dofs, out=args.out,
        plot_out=args.plot_out, oracle=args.oracle, jobs=args.jobs,
    ).validate()


def _sweep(cfg: SweepConfig):
    outcome = run_sweep(cfg)
    for s in outcome.skipped:
        print(f"skipped L={s.L:g} N={s.N} K={s.K} (n_u={s.n_u}): {s.reason}", file=sys.stderr)
    return outcome


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        cfg = _config(args)
        if args.command == "plot" and args.from_csv is not None:
            results = read_csv(args.from_csv)
            render_plot(results, args.plot_out or Path("infsup.svg"))
            return 0

        outcome = _sweep(cfg)
        results = outcome.results
        if not results:
            print("error: no case was computed", file=sys.stderr)
            return 1
        if cfg.out is not None:
            write_csv(results, cfg.out, outcome.skipped, timings=args.timings)
        if args.command == "plot" or cfg.plot_out is not None:
            render_plot(results, cfg.plot_out or Path("infsup.svg"))

        if args.command == "check":
            report = check_against_paper(results)
            print(report.format())
            return 0 if report.passed else 1

        if args.command == "sweep" and cfg.out is None:
            for r in results:
                print(f"L={r.L:g} N={r.N} K={r.K} beta_h={r.beta_h:.15g}")
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
