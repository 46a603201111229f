"""Recompute both published tables and print them next to the reference values.

    python scripts/reproduce_tables.py --out results/tables.csv [--max-dofs 5000]
"""
import argparse
import logging
from pathlib import Path

from infsup.paper_data import PAPER_REFERENCE
from infsup.sweep import SweepConfig, check_against_paper, run_sweep, write_csv


def print_table(L, results):
    by_key = {r.key: r.beta_h for r in results if r.L == L}
    Ks = sorted({K for (l, _, K) in PAPER_REFERENCE if l == L})
    print(f"\nOmega = [0,{L:g}]^2   (computed / published)")
    print(f"{'h':>6} " + " ".join(f"{'N=' + str(N):^37}" for N in (1, 2, 3)))
    for K in Ks:
        cells = []
        for N in (1, 2, 3):
            ours = by_key.get((L, N, K))
            ref = PAPER_REFERENCE.get((L, N, K))
            a = f"{ours:.15f}" if ours is not None else " " * 17
            b = f"{ref:.15f}" if ref is not None else " " * 17
            cells.append(f"{a} / {b}")
        print(f"{'1/' + str(K):>6} " + " ".join(cells))


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", type=Path, default=Path("results/tables.csv"))
    p.add_argument("--max-dofs", type=int, default=10000)
    p.add_argument("--jobs", type=int, default=1)
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    outcome = run_sweep(SweepConfig(max_dofs=args.max_dofs, jobs=args.jobs))
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(outcome.results, args.out, outcome.skipped)
    for L in (1.0, 2.0):
        print_table(L, outcome.results)
    print()
    print(check_against_paper(outcome.results).format())


if __name__ == "__main__":
    main()
