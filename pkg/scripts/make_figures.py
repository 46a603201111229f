"""Render the beta_h-vs-h figures (one SVG per domain) from a sweep CSV.

    python scripts/make_figures.py results/tables.csv --outdir results
"""
import argparse
from pathlib import Path

from infsup.plotting import render_plot
from infsup.sweep import read_csv


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("csv", type=Path)
    p.add_argument("--outdir", type=Path, default=Path("results"))
    args = p.parse_args()
    results = read_csv(args.csv)
    args.outdir.mkdir(parents=True, exist_ok=True)
    for i, L in enumerate(sorted({r.L for r in results}), start=1):
        path = render_plot([r for r in results if r.L == L], args.outdir / f"figure{i}_L{L:g}.svg")
        print(path)


if __name__ == "__main__":
    main()
