"""Log-concavity ``p_k(n)^2 >= p_k(n-1) p_k(n+1)`` and its exceptions."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import partial
from typing import Optional

from . import golden
from ._pool import ordered_map
from .arith import INF, KIndex, PartitionTable, format_k
from .cache import get_table
from .errors import TableRangeError

# failure set of the ordinary partition function: the odd n <= 25
P_INF_FAILURES = tuple(range(1, 26, 2))
N_INF = 26


def logconc_defect(table: PartitionTable, n: int) -> int:
    """``p_k(n)^2 - p_k(n-1) p_k(n+1)``; negative means log-concavity fails at n."""
    if not 1 <= n <= table.n_max - 1:
        raise TableRangeError(f"defect needs 1 <= n <= {table.n_max - 1}, got {n}")
    p = table.values
    return p[n] * p[n] - p[n - 1] * p[n + 1]


@dataclass
class LogConcavityReport:
    k: KIndex
    n_max: int
    failures: list[int]
    horizon_caveat: bool = True  # N_k is only known to be exact up to n_max

    @property
    def estimated_N_k(self) -> int:
        return 1 + max(self.failures) if self.failures else 1

    def to_dict(self) -> dict:
        return {"k": format_k(self.k), "n_max": self.n_max, "failures": self.failures,
                "estimated_N_k": self.estimated_N_k, "horizon_caveat": self.horizon_caveat}


def enumerate_failures(table: PartitionTable, n_max: int) -> LogConcavityReport:
    if n_max > table.n_max - 1:
        raise TableRangeError(f"n_max={n_max} needs a table up to {n_max + 1}, have {table.n_max}")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    p = table.values
    fails = [n for n in range(1, n_max + 1) if p[n] * p[n] < p[n - 1] * p[n + 1]]
    return LogConcavityReport(table.k, n_max, fails)


def failures_for(k: KIndex, n_max: int, cache_dir=None) -> LogConcavityReport:
    return enumerate_failures(get_table(k, n_max + 1, cache_dir), n_max)


@dataclass
class ConjectureReport:
    k_from: int
    k_to: int
    n_max: int
    reports: list[LogConcavityReport]
    mismatched: list[KIndex] = field(default_factory=list)

    @property
    def contradictions(self) -> list[KIndex]:
        """k >= 30 whose failures differ from those of p (would refute the conjecture)."""
        return [k for k in self.mismatched if k >= 30]

    @property
    def stabilization_k(self) -> Optional[int]:
        """Smallest k in range from which every scanned k matches p, if any."""
        first = None
        for r in reversed(self.reports):
            if r.failures != list(P_INF_FAILURES):
                break
            first = r.k
        return first

    def to_dict(self) -> dict:
        return {
            "k_from": self.k_from, "k_to": self.k_to, "n_max": self.n_max,
            "mismatched_k": [format_k(k) for k in self.mismatched],
            "contradictions": [format_k(k) for k in self.contradictions],
            "stabilization_k_within_horizon": self.stabilization_k,
            "reports": [r.to_dict() for r in self.reports],
        }


def conjecture_scan(k_from: int, k_to: int, n_max: int, *, cache_dir=None,
                    jobs: int = 1) -> ConjectureReport:
    """For each k, compare the failures within ``[1, n_max]`` with the odd n <= 25."""
    if k_from < 2:
        raise ValueError(f"k_from must be >= 2, got {k_from}")
    if k_to < k_from:
        raise ValueError("empty k range")
    if n_max < 100:
        raise ValueError(f"n_max must be >= 100, got {n_max}")
    work = partial(failures_for, n_max=n_max, cache_dir=cache_dir)
    reports = list(ordered_map(work, range(k_from, k_to + 1), jobs))
    mism = [r.k for r in reports if r.failures != list(P_INF_FAILURES)]
    return ConjectureReport(k_from, k_to, n_max, reports, mism)


@dataclass
class Grid:
    """Bullet grid: ``cells[(n, k)]`` is True where log-concavity fails."""

    ks: list[int]
    ns: list[int]
    cells: dict[tuple[int, int], bool]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n"] + self.ks)
        for n in self.ns:
            w.writerow([n] + ["1" if self.cells[n, k] else "" for k in self.ks])
        return buf.getvalue()

    def to_markdown(self) -> str:
        lines = ["| n\\k | " + " | ".join(map(str, self.ks)) + " |",
                 "|---" * (len(self.ks) + 1) + "|"]
        for n in self.ns:
            row = ["•" if self.cells[n, k] else " " for k in self.ks]
            lines.append(f"| {n} | " + " | ".join(row) + " |")
        return "\n".join(lines) + "\n"


def emit_table3(k_from: int = 2, k_to: int = 20, n_max: int = 45, *, cache_dir=None,
                jobs: int = 1) -> Grid:
    ks = list(range(k_from, k_to + 1))
    work = partial(failures_for, n_max=n_max, cache_dir=cache_dir)
    cells = {}
    for k, rep in zip(ks, ordered_map(work, ks, jobs)):
        fails = set(rep.failures)
        for n in range(1, n_max + 1):
            cells[n, k] = n in fails
    return Grid(ks, list(range(1, n_max + 1)), cells)


def golden_table3() -> Grid:
    rows = golden.table3()
    ks, ns = list(golden.TABLE3_K), list(golden.TABLE3_N)
    return Grid(ks, ns, {(n, k): k in rows[n] for n in ns for k in ks})


def diff_grids(got: Grid, want: Grid) -> list[tuple[int, int, bool, bool]]:
    """``(n, k, computed, expected)`` for every differing cell, row-major."""
    if got.ks != want.ks or got.ns != want.ns:
        raise ValueError("grids cover different ranges")
    return [(n, k, got.cells[n, k], want.cells[n, k])
            for n in got.ns for k in got.ks if got.cells[n, k] != want.cells[n, k]]


def failures_inf(n_max: int, cache_dir=None) -> LogConcavityReport:
    return failures_for(INF, n_max, cache_dir)
