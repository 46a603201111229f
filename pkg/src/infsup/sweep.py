"""Parameter sweeps over (L, N, K), CSV output and comparison with published values."""
from __future__ import annotations

import csv
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .core import DEFAULT_TOL_FACTOR, MODES, InfSupResult, compute_infsup
from .errors import ConfigError
from .paper_data import PAPER_REFERENCE

log = logging.getLogger(__name__)

CSV_HEADER = ["L", "N", "K", "h", "mode", "beta_h", "rank_E", "n_u", "n_p",
              "sigma_cutoff", "elapsed_ms"]
SKIPPED_HEADER = ["L", "N", "K", "h", "mode", "n_u", "n_p", "reason"]
ORACLE_MAX_DOFS = 2000
PAPER_TOL = 1e-6
ORACLE_TOL = 1e-9


def default_jobs() -> int:
    env = os.environ.get("INFSUP_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"INFSUP_JOBS must be an integer, got {env!r}") from None
    return 1


@dataclass
class SweepConfig:
    L: list[float] = field(default_factory=lambda: [1.0, 2.0])
    degrees: list[int] = field(default_factory=lambda: [1, 2, 3])
    refinements: list[int] = field(default_factory=lambda: [2, 4, 8, 16, 32, 64])
    mode: str = "kperp"
    tol_factor: float = DEFAULT_TOL_FACTOR
    max_dofs: int = 10000
    out: Path | None = None
    plot_out: Path | None = None
    oracle: bool = False
    jobs: int = 1

    def validate(self) -> "SweepConfig":
        for name in ("L", "degrees", "refinements"):
            if not getattr(self, name):
                raise ConfigError(f"{name} list is empty")
        if any(not (math.isfinite(x) and x > 0) for x in self.L):
            raise ConfigError(f"domain sizes must be positive: {self.L}")
        for name in ("degrees", "refinements"):
            vals = getattr(self, name)
            if any(int(v) != v or v < 1 for v in vals):
                raise ConfigError(f"{name} must be integers >= 1: {vals}")
        if any(b <= a for a, b in zip(self.refinements, self.refinements[1:])):
            raise ConfigError(f"refinements must be strictly ascending: {self.refinements}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.max_dofs > 0:
            raise ConfigError("max-dofs guard must be positive")
        if not (math.isfinite(self.tol_factor) and self.tol_factor > 0):
            raise ConfigError("rank tolerance factor must be positive")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        return self

    def cases(self) -> list[tuple[float, int, int]]:
        return sorted({(float(L), int(N), int(K))
                       for L in self.L for N in self.degrees for K in self.refinements})


@dataclass(frozen=True)
class SkippedCase:
    L: float
    N: int
    K: int
    mode: str
    n_u: int
    n_p: int
    reason: str

    @property
    def h(self) -> float:
        return self.L / self.K


@dataclass
class SweepOutcome:
    results: list[InfSupResult]
    skipped: list[SkippedCase]


def _dof_counts(N: int, K: int) -> tuple[int, int]:
    n = N * K
    return 2 * n * (n + 1), n * n


def _run_case(args):
    L, N, K, mode, tol_factor, oracle = args
    try:
        n_u, _ = _dof_counts(N, K)
        return compute_infsup(L, N, K, mode, tol_factor=tol_factor,
                              oracle=oracle and n_u <= ORACLE_MAX_DOFS)
    except Exception as exc:  # one bad case must not abort the sweep
        return exc


def run_sweep(config: SweepConfig) -> SweepOutcome:
    """Compute every case within the DOF guard; ordered by (L, N, K)."""
    config.validate()
    todo, skipped = [], []
    for L, N, K in config.cases():
        n_u, n_p = _dof_counts(N, K)
        if n_u > config.max_dofs:
            skipped.append(SkippedCase(L, N, K, config.mode, n_u, n_p, "dof-guard"))
        else:
            todo.append((L, N, K, config.mode, config.tol_factor, config.oracle))

    if config.jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outs = list(pool.map(_run_case, todo))
    else:
        outs = []
        for case in todo:
            log.info("L=%g N=%d K=%d ...", *case[:3])
            outs.append(_run_case(case))

    results = []
    for case, out in zip(todo, outs):
        L, N, K, mode = case[:4]
        if isinstance(out, Exception):
            n_u, n_p = _dof_counts(N, K)
            log.error("case L=%g N=%d K=%d failed: %s", L, N, K, out)
            skipped.append(SkippedCase(L, N, K, mode, n_u, n_p,
                                       f"error: {type(out).__name__}: {out}"))
        else:
            results.append(out)
    results.sort(key=lambda r: r.key)
    skipped.sort(key=lambda s: (s.L, s.N, s.K))
    return SweepOutcome(results, skipped)


def _fmt(x: float) -> str:
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else f"{x:.15g}"


def write_csv(results: Sequence[InfSupResult], path, skipped: Sequence[SkippedCase] = (),
              timings: bool = False) -> Path:
    """Write results sorted by (L, N, K); skipped cases go to ``<path>.skipped.csv``.

    ``elapsed_ms`` is left empty unless ``timings`` is set, so that repeated
    runs give byte-identical files.
    """
    path = Path(path)
    rows = sorted(results, key=lambda r: r.key)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for r in rows:
                w.writerow([_fmt(r.L), r.N, r.K, _fmt(r.h), r.mode, _fmt(r.beta_h),
                            r.rank_E, r.n_u, r.n_p, _fmt(r.sigma_cutoff),
                            f"{r.elapsed_ms:.1f}" if timings else ""])
        if skipped:
            with open(f"{path}.skipped.csv", "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(SKIPPED_HEADER)
                for s in sorted(skipped, key=lambda s: (s.L, s.N, s.K)):
                    w.writerow([_fmt(s.L), s.N, s.K, _fmt(s.h), s.mode, s.n_u, s.n_p, s.reason])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def read_csv(path) -> list[InfSupResult]:
    nan = float("nan")
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(InfSupResult(
                L=float(row["L"]), N=int(row["N"]), K=int(row["K"]), mode=row["mode"],
                beta_h=float(row["beta_h"]), rank_E=int(row["rank_E"]),
                n_u=int(row["n_u"]), n_p=int(row["n_p"]),
                sigma_cutoff=float(row["sigma_cutoff"] or nan),
                smallest_retained=float(row["beta_h"]), largest_discarded=nan,
                elapsed_ms=float(row["elapsed_ms"] or nan),
            ))
    return out


@dataclass(frozen=True)
class CheckRow:
    L: float
    N: int
    K: int
    beta_h: float
    beta_paper: float
    diff_paper: float
    diff_one: float
    oracle_diff: float | None
    passed: bool


@dataclass
class CheckReport:
    rows: list[CheckRow]
    tol: float = PAPER_TOL

    @property
    def passed(self) -> bool:
        return bool(self.rows) and all(r.passed for r in self.rows)

    def format(self) -> str:
        lines = [f"{'L':>4} {'N':>2} {'h':>6} {'beta_h':>18} {'reference':>18} "
                 f"{'|diff|':>9} {'|1-beta|':>9}  status"]
        for r in self.rows:
            lines.append(
                f"{r.L:>4g} {r.N:>2d} {'1/' + str(r.K):>6} {r.beta_h:>18.15f} "
                f"{r.beta_paper:>18.15f} {r.diff_paper:>9.2e} {r.diff_one:>9.2e}  "
                f"{'PASS' if r.passed else 'FAIL'}"
            )
        n_fail = sum(not r.passed for r in self.rows)
        lines.append(f"{len(self.rows) - n_fail}/{len(self.rows)} cases within {self.tol:g}")
        return "\n".join(lines)


def check_against_paper(results: Sequence[InfSupResult],
                        refs: Mapping[tuple[float, int, int], float] = PAPER_REFERENCE,
                        tol: float = PAPER_TOL) -> CheckReport:
    """Compare every case present in both ``results`` and ``refs``."""
    rows = []
    for r in sorted(results, key=lambda r: r.key):
        if r.mode != "kperp":
            raise ConfigError(f"published values are for kperp mode, got {r.mode!r}")
        ref = refs.get(r.key)
        if ref is None:
            continue
        d_paper = abs(r.beta_h - ref)
        d_one = abs(r.beta_h - 1.0)
        ok = d_paper <= tol and d_one <= tol
        o_diff = None
        if r.beta_oracle is not None:
            o_diff = abs(r.beta_oracle - r.beta_h)
            ok = ok and o_diff <= ORACLE_TOL
        rows.append(CheckRow(r.L, r.N, r.K, r.beta_h, ref, d_paper, d_one, o_diff, ok))
    return CheckReport(rows, tol)
