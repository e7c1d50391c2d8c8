"""Bessenrodt-Ono inequality ``p_k(a) p_k(b) > p_k(a+b)`` for k-regular partitions.

Pairs are normalized to ``1 < a <= b``. ``E_k`` collects the pairs with
equality, ``F_k`` the pairs where the inequality is reversed.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from enum import Enum
from functools import lru_cache, partial
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from . import golden
from ._pool import ordered_map
from .arith import INF, KIndex, PartitionTable, build_table_from_partitions, format_k, parse_k
from .cache import get_table
from .errors import CampaignAborted, TableRangeError

# below this natural-log margin the float pre-filter defers to exact integers
PREFILTER_MARGIN = 1.0


class DeltaSign(Enum):
    POSITIVE = "positive"
    ZERO = "zero"
    NEGATIVE = "negative"

    @classmethod
    def of(cls, value: int) -> DeltaSign:
        if value > 0:
            return cls.POSITIVE
        if value < 0:
            return cls.NEGATIVE
        return cls.ZERO


@dataclass(frozen=True, order=True)
class Pair:
    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a > self.b:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)
        if self.a <= 1:
            raise ValueError(f"pairs need 1 < a <= b, got ({self.a}, {self.b})")

    def astuple(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


def _pair(p) -> Pair:
    return p if isinstance(p, Pair) else Pair(*p)


def delta(table: PartitionTable, pair) -> tuple[int, DeltaSign]:
    """Exact ``p_k(a) p_k(b) - p_k(a+b)`` and its sign."""
    p = _pair(pair)
    if p.a + p.b > table.n_max:
        raise TableRangeError(f"a+b={p.a + p.b} exceeds table range {table.n_max}")
    v = table[p.a] * table[p.b] - table[p.a + p.b]
    return v, DeltaSign.of(v)


@dataclass(frozen=True)
class Family:
    """Pairs ``(a0, b)`` for all ``b >= b_from``, checked up to ``b = verified_to``."""

    a0: int
    b_from: int
    sign: DeltaSign
    verified_to: int

    def to_dict(self) -> dict:
        return {"a0": self.a0, "b_from": self.b_from, "sign": self.sign.value,
                "verified_to": self.verified_to}

    def covers(self, p: Pair) -> bool:
        return p.a == self.a0 and self.b_from <= p.b <= self.verified_to


@dataclass
class ExceptionReport:
    k: KIndex
    search_bound: int
    equality_pairs: list[Pair]
    reversed_pairs: list[Pair]
    infinite_families: list[Family] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "k": format_k(self.k),
            "search_bound": self.search_bound,
            "equality_pairs": [list(p.astuple()) for p in self.equality_pairs],
            "reversed_pairs": [list(p.astuple()) for p in self.reversed_pairs],
            "infinite_families": [f.to_dict() for f in self.infinite_families],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> ExceptionReport:
        return cls(
            k=parse_k(str(d["k"])),
            search_bound=int(d["search_bound"]),
            equality_pairs=[Pair(*p) for p in d["equality_pairs"]],
            reversed_pairs=[Pair(*p) for p in d["reversed_pairs"]],
            infinite_families=[
                Family(f["a0"], f["b_from"], DeltaSign(f["sign"]), f["verified_to"])
                for f in d["infinite_families"]
            ],
        )

    def equality_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(p.astuple() for p in self.equality_pairs)

    def reversed_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(p.astuple() for p in self.reversed_pairs)

    def recheck(self, table: PartitionTable) -> bool:
        """Re-derive every stored sign against ``table``."""
        if any(delta(table, p)[1] is not DeltaSign.ZERO for p in self.equality_pairs):
            return False
        if any(delta(table, p)[1] is not DeltaSign.NEGATIVE for p in self.reversed_pairs):
            return False
        for fam in self.infinite_families:
            if table[fam.a0] != 1:
                return False
            for b in range(fam.b_from, fam.verified_to + 1):
                if delta(table, (fam.a0, b))[1] is not fam.sign:
                    return False
        return True


def enumerate_exceptions(table: PartitionTable, sum_bound: int) -> ExceptionReport:
    """Scan every pair ``1 < a <= b`` with ``a + b <= sum_bound``.

    An ``a0`` with ``p_k(a0) = 1`` gives ``Delta(a0, b) = p_k(b) - p_k(a0+b)``;
    if ``p_k(n + a0) > p_k(n)`` holds on the whole scanned range the pairs
    ``(a0, b)`` are reported once as an infinite family instead of one by one.
    """
    if sum_bound < 4:
        raise ValueError(f"sum_bound must be >= 4, got {sum_bound}")
    if sum_bound > table.n_max:
        raise TableRangeError(f"sum_bound {sum_bound} exceeds table range {table.n_max}")
    p = table.values
    families = []
    for a0 in range(2, sum_bound // 2 + 1):
        if p[a0] == 1 and all(p[n + a0] > p[n] for n in range(a0, sum_bound - a0 + 1)):
            families.append(Family(a0, a0, DeltaSign.NEGATIVE, sum_bound - a0))
    family_rows = {f.a0 for f in families}

    equal, rev = [], []
    for a in range(2, sum_bound // 2 + 1):
        if a in family_rows:
            continue
        pa = p[a]
        for b in range(a, sum_bound - a + 1):
            d = pa * p[b] - p[a + b]
            if d == 0:
                equal.append(Pair(a, b))
            elif d < 0:
                rev.append(Pair(a, b))
    return ExceptionReport(table.k, sum_bound, equal, rev, families)


def exceptions_markdown(reports: Iterable[ExceptionReport]) -> str:
    lines = ["| k | Elements of E_k | Elements of F_k |", "|---|---|---|"]
    for r in reports:
        eq = ", ".join(str(p) for p in r.equality_pairs)
        fam = [f"(2,b), b ≥ {f.b_from}" if f.a0 == 2 else f"({f.a0},b), b ≥ {f.b_from}"
               for f in r.infinite_families]
        rev = ", ".join(fam + [str(p) for p in r.reversed_pairs])
        lines.append(f"| {format_k(r.k)} | {eq} | {rev} |")
    return "\n".join(lines) + "\n"


def compare_with_golden(report: ExceptionReport) -> list[str]:
    """Differences between a scan and the transcribed tables (empty if equal)."""
    g = golden.bo_exceptions(report.k)
    bound = report.search_bound
    want_eq = {p for p in g.equality if sum(p) <= bound}
    want_rev = {p for p in g.reversed if sum(p) <= bound}
    diffs = []
    for label, got, want in (("E", report.equality_set(), want_eq), ("F", report.reversed_set(), want_rev)):
        for p in sorted(got - want):
            diffs.append(f"k={format_k(report.k)}: {p} in computed {label} but not in table")
        for p in sorted(want - got):
            diffs.append(f"k={format_k(report.k)}: {p} in table {label} but not computed")
    got_fam = {(f.a0, f.b_from) for f in report.infinite_families}
    if got_fam != set(g.families):
        diffs.append(f"k={format_k(report.k)}: families {sorted(got_fam)} != table {sorted(g.families)}")
    return diffs


@dataclass
class ThresholdResult:
    k: int
    n_k: int
    m_k: int
    sum_bound: int
    pairs_checked: int
    violations: list[Pair]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"k": self.k, "n_k": self.n_k, "m_k": self.m_k, "sum_bound": self.sum_bound,
                "pairs_checked": self.pairs_checked, "passed": self.passed,
                "violations": [list(p.astuple()) for p in self.violations]}


def check_thresholds(table: PartitionTable, k: int, sum_bound: int) -> ThresholdResult:
    """Check ``Delta_k(a, b) > 0`` for ``a, b >= n_k`` and ``m_k <= a+b <= sum_bound``."""
    th = golden.thresholds()
    if k not in th:
        raise ValueError(f"thresholds are tabulated for 2 <= k <= 6, got k={k}")
    if table.k != k:
        raise ValueError(f"table is for k={format_k(table.k)}, not k={k}")
    if sum_bound > table.n_max:
        raise TableRangeError(f"sum_bound {sum_bound} exceeds table range {table.n_max}")
    n_k, m_k = th[k]
    p = table.values
    bad, count = [], 0
    for a in range(max(n_k, 2), sum_bound // 2 + 1):
        for b in range(max(a, m_k - a), sum_bound - a + 1):
            count += 1
            if p[a] * p[b] <= p[a + b]:
                bad.append(Pair(a, b))
    return ThresholdResult(k, n_k, m_k, sum_bound, count, bad)


@dataclass
class StabilizationRow:
    k: int
    equal: bool
    differences: list[str]


@dataclass
class StabilizationReport:
    k_from: int
    k_to: int
    sum_bound: int
    rows: list[StabilizationRow]

    @property
    def all_equal(self) -> bool:
        return all(r.equal for r in self.rows)

    def to_dict(self) -> dict:
        return {"k_from": self.k_from, "k_to": self.k_to, "sum_bound": self.sum_bound,
                "all_equal": self.all_equal,
                "rows": [asdict(r) for r in self.rows]}


def _stabilization_row(k: int, sum_bound: int, cache_dir, reference: dict) -> StabilizationRow:
    rep = enumerate_exceptions(get_table(k, sum_bound, cache_dir), sum_bound)
    diffs = []
    for label, got, want in (("E", rep.equality_set(), reference["E"]),
                             ("F", rep.reversed_set(), reference["F"])):
        diffs += [f"{p} extra in {label}_{k}" for p in sorted(got - want)]
        diffs += [f"{p} missing from {label}_{k}" for p in sorted(want - got)]
    if rep.infinite_families:
        diffs.append(f"unexpected infinite families for k={k}")
    return StabilizationRow(k, not diffs, diffs)


def stabilization_scan(k_from: int, k_to: int, sum_bound: int, *, cache_dir=None,
                       jobs: int = 1) -> StabilizationReport:
    """Compare E_k, F_k with E_inf, F_inf for every ``k_from <= k <= k_to``."""
    if k_from < 10:
        raise ValueError(f"stabilization is only claimed for k >= 10, got k_from={k_from}")
    if k_to < k_from:
        raise ValueError("empty k range")
    if sum_bound < 20:
        raise ValueError(f"sum_bound must be >= 20, got {sum_bound}")
    ref = enumerate_exceptions(get_table(INF, sum_bound, cache_dir), sum_bound)
    reference = {"E": ref.equality_set(), "F": ref.reversed_set()}
    work = partial(_stabilization_row, sum_bound=sum_bound, cache_dir=cache_dir, reference=reference)
    rows = list(ordered_map(work, range(k_from, k_to + 1), jobs))
    return StabilizationReport(k_from, k_to, sum_bound, rows)


@dataclass(frozen=True)
class VerificationParams:
    """Constants of the induction: S(m) is checked for a, b >= A, B <= m <= N0."""

    k_class: str  # "2", "3" or ">3"
    A: int
    B: int
    N0: int
    thresholds: dict = field(default_factory=golden.thresholds, compare=False)

    @classmethod
    def for_class(cls, k_class: str) -> VerificationParams:
        try:
            a, b, n0 = REFERENCE_CONSTANTS[k_class]
        except KeyError:
            raise ValueError(f"unknown k class {k_class!r}; use '2', '3' or '>3'") from None
        return cls(k_class, a, b, n0)

    def ks(self, k_max: int, n0: int) -> list[KIndex]:
        if self.k_class == "2":
            return [2]
        if self.k_class == "3":
            return [3]
        ks: list[KIndex] = list(range(4, min(k_max, n0) + 1))
        if k_max > n0:
            # every k > n0 has p_k(n) = p(n) on 0..n0
            ks.append(INF)
        return ks


REFERENCE_CONSTANTS = {">3": (2, 10, 2938), "2": (3, 22, 3662), "3": (2, 17, 3776)}


@dataclass
class CampaignRow:
    k: KIndex
    pairs_checked: int
    exact_checks: int
    violations: list[Pair]
    below_threshold: int
    below_threshold_mismatches: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.below_threshold_mismatches

    def to_dict(self) -> dict:
        return {
            "k": format_k(self.k),
            "pairs_checked": self.pairs_checked,
            "exact_checks": self.exact_checks,
            "violations": [list(p.astuple()) for p in self.violations],
            "below_threshold_exceptions": self.below_threshold,
            "below_threshold_mismatches": self.below_threshold_mismatches,
        }

    @classmethod
    def from_dict(cls, d: dict) -> CampaignRow:
        return cls(parse_k(d["k"]), d["pairs_checked"], d["exact_checks"],
                   [Pair(*p) for p in d["violations"]], d["below_threshold_exceptions"],
                   d["below_threshold_mismatches"])


@dataclass
class CampaignReport:
    k_class: str
    A: int
    B: int
    N0: int
    exclusions: bool
    rows: list[CampaignRow]
    complete: bool = True

    @property
    def unexpected(self) -> int:
        return sum(len(r.violations) for r in self.rows)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "k_class": self.k_class, "A": self.A, "B": self.B, "N0": self.N0,
            "exclusions": self.exclusions, "complete": self.complete,
            "ks_checked": len(self.rows),
            "pairs_checked": sum(r.pairs_checked for r in self.rows),
            "unexpected_violations": self.unexpected,
            "ok": self.ok,
            "rows": [r.to_dict() for r in self.rows],
        }


@lru_cache(maxsize=4)
def _partition_numbers(n0: int, cache_dir) -> tuple[int, ...]:
    return get_table(INF, n0, cache_dir).values


def _nonpositive_pairs(p, lo_a: int, hi_sum: int, min_sum: int, logs) -> tuple[list[Pair], int, int]:
    """Pairs ``lo_a <= a <= b``, ``min_sum <= a+b <= hi_sum`` with Delta <= 0.

    Returns ``(pairs, checked, exact)``. A float log margin >= PREFILTER_MARGIN
    settles a pair as positive; anything closer is decided with exact integers.
    """
    bad, checked, exact = [], 0, 0
    for a in range(lo_a, hi_sum // 2 + 1):
        b_lo = max(a, min_sum - a)
        b_hi = hi_sum - a
        if b_hi < b_lo:
            continue
        checked += b_hi - b_lo + 1
        if logs is None:
            cand = range(b_lo, b_hi + 1)
        else:
            bs = np.arange(b_lo, b_hi + 1)
            margin = logs[a] + logs[bs] - logs[bs + a]
            cand = bs[margin < PREFILTER_MARGIN].tolist()
        pa = p[a]
        for b in cand:
            exact += 1
            if pa * p[b] <= p[a + b]:
                bad.append(Pair(a, b))
    return bad, checked, exact


def _expected_nonpositive(k: KIndex, n0: int) -> set[tuple[int, int]]:
    g = golden.bo_exceptions(k)
    want = {p for p in g.equality | g.reversed if sum(p) <= n0}
    for a0, b_from in g.families:
        want |= {(a0, b) for b in range(b_from, n0 - a0 + 1)}
    return want


def _campaign_row(k: KIndex, params: VerificationParams, n0: int, exclusions: bool,
                  cache_dir, prefilter: bool) -> CampaignRow:
    p_inf = _partition_numbers(n0, cache_dir)
    p = build_table_from_partitions(k, p_inf).values
    logs = np.array([math.log(v) for v in p]) if prefilter else None
    expected = _expected_nonpositive(k, n0)

    if not exclusions:
        bad, checked, exact = _nonpositive_pairs(p, 2, n0, 4, logs)
        return CampaignRow(k, checked, exact, bad, 0, [])

    bad, checked, exact = _nonpositive_pairs(p, params.A, n0, params.B, logs)
    violations = [q for q in bad if q.astuple() not in expected]
    got_below = set()
    for a in range(2, n0 // 2 + 1):
        b_hi = n0 - a if a < params.A else min(n0, params.B - 1) - a
        for b in range(a, b_hi + 1):
            if p[a] * p[b] <= p[a + b]:
                got_below.add((a, b))
    want_below = {q for q in expected if q[0] < params.A or sum(q) < params.B}
    mism = [f"{q} nonpositive but not tabulated" for q in sorted(got_below - want_below)]
    mism += [f"{q} tabulated but Delta > 0" for q in sorted(want_below - got_below)]
    return CampaignRow(k, checked, exact, violations, len(got_below), mism)


def _checkpoint_path(cache_dir, params: VerificationParams, n0: int, exclusions: bool) -> Optional[Path]:
    if cache_dir is None:
        return None
    tag = {"2": "k2", "3": "k3", ">3": "kgt3"}[params.k_class]
    return Path(cache_dir) / f"campaign_{tag}_n0{n0}_A{params.A}_B{params.B}_x{int(exclusions)}.json"


def induction_campaign(params: VerificationParams, k_max: int, n0_override: Optional[int] = None,
                       *, exclusions: bool = True, cache_dir=None, jobs: int = 1,
                       time_budget: Optional[float] = None, prefilter: bool = True) -> CampaignReport:
    """Direct check of S(m) for B <= m <= N0 and every relevant k.

    With ``exclusions`` the scan covers ``a, b >= A``, ``B <= a+b <= N0`` and
    nonpositive pairs listed in the known tables are not counted as
    violations; the remaining region is compared against those tables.
    Without it every normalized pair with ``a+b <= N0`` is scanned and every
    nonpositive Delta is reported.

    Finished rows are checkpointed under ``cache_dir``; exceeding
    ``time_budget`` seconds raises :class:`CampaignAborted` carrying the
    partial report, and a later call resumes from the checkpoint.
    """
    if k_max < 2:
        raise ValueError(f"k_max must be >= 2, got {k_max}")
    n0 = params.N0 if n0_override is None else n0_override
    if n0 < max(params.B, 4):
        raise ValueError(f"N0={n0} is below B={params.B}")
    ks = params.ks(k_max, n0)
    if not ks:
        raise ValueError(f"no k to check for class {params.k_class!r} with k_max={k_max}")

    ckpt = _checkpoint_path(cache_dir, params, n0, exclusions)
    done: dict[str, CampaignRow] = {}
    if ckpt is not None and ckpt.exists():
        for d in json.loads(ckpt.read_text(encoding="utf-8"))["rows"]:
            done[d["k"]] = CampaignRow.from_dict(d)

    def snapshot(complete: bool) -> CampaignReport:
        rows = [done[format_k(k)] for k in ks if format_k(k) in done]
        return CampaignReport(params.k_class, params.A, params.B, n0, exclusions, rows, complete)

    def save() -> None:
        if ckpt is not None:
            ckpt.parent.mkdir(parents=True, exist_ok=True)
            ckpt.write_text(json.dumps(snapshot(False).to_dict()), encoding="utf-8")

    todo = [k for k in ks if format_k(k) not in done]
    work = partial(_campaign_row, params=params, n0=n0, exclusions=exclusions,
                   cache_dir=cache_dir, prefilter=prefilter)
    start = time.monotonic()
    chunk = max(1, 4 * jobs)
    for i in range(0, len(todo), chunk):
        for row in ordered_map(work, todo[i : i + chunk], jobs):
            done[format_k(row.k)] = row
        save()
        if time_budget is not None and time.monotonic() - start > time_budget and i + chunk < len(todo):
            raise CampaignAborted(
                f"time budget of {time_budget}s exceeded after {len(done)} of {len(ks)} k values",
                partial=snapshot(False))
    return snapshot(True)

