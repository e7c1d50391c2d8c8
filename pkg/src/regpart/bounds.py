"""Certified checks of the explicit bounds used in the induction proof.

* ``g_k(n) <= n (1 + ln n)``
* lemma:  ``p_k(n) > 2^(sqrt(2n/3 + 1/4) - 3/2)``
* remark: ``p_k(n) >= 2^floor(sqrt(2n/3 + 1/4) - 1/2)``
* the final bracket ``-48 a^2 (1 + ln 2a) + 2^(sqrt(2(a-1)/3 + 1/4) - 3/2)``

All real-valued comparisons go through :mod:`regpart.rigorous` enclosures,
so a reported pass or sign is a proof, not a floating-point estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Optional

from .arith import KIndex, PartitionTable, check_k, format_k, g_values
from .bo import DeltaSign
from .cache import get_table
from .errors import PrecisionExhaustedError
from .rigorous import MAX_BITS, START_BITS, RigorousReal, certified_sign

LEMMA = "lemma"
REMARK = "remark"
FINAL_FROM = 1470


@dataclass
class BoundReport:
    check: str
    range: tuple[int, int]
    result: bool
    first_failure: Optional[int] = None
    max_precision_bits_used: int = 0
    counterexamples: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = {"check": self.check, "range": list(self.range),
             "result": "pass" if self.result else "fail",
             "max_precision_bits_used": self.max_precision_bits_used}
        if self.first_failure is not None:
            d["first_failure"] = self.first_failure
        return d


def _compare(value: int, build: Callable[[int], RigorousReal], strict_upper: bool) -> tuple[bool, int]:
    """Decide ``value <= x`` (or ``value > x`` if ``strict_upper``) for the real x.

    Returns ``(holds, bits)``; escalates precision while undecided.
    """
    bits = START_BITS
    while True:
        x = build(bits)
        if strict_upper:
            if value > x.upper:
                return True, bits
            if value <= x.lower:
                return False, bits
        else:
            if value <= x.lower:
                return True, bits
            if value > x.upper:
                return False, bits
        if bits >= MAX_BITS:
            raise PrecisionExhaustedError(f"comparison of {value} undecided at {bits} bits")
        bits = min(2 * bits, MAX_BITS)


def g_bound(n: int, prec: int) -> RigorousReal:
    """Enclosure of ``n (1 + ln n)``."""
    return (RigorousReal.exact(n, prec).ln() + 1) * n


def check_g_bound(k: KIndex, n_max: int) -> BoundReport:
    k = check_k(k)
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    g = g_values(k, n_max)
    report = BoundReport(f"g_bound k={format_k(k)}", (1, n_max), True)
    for n in range(1, n_max + 1):
        ok, bits = _compare(g[n], lambda prec: g_bound(n, prec), strict_upper=False)
        report.max_precision_bits_used = max(report.max_precision_bits_used, bits)
        if not ok:
            report.counterexamples.append(n)
    _finish(report)
    return report


def lemma_exponent(n: int, prec: int) -> RigorousReal:
    """Enclosure of ``sqrt(2n/3 + 1/4) - 3/2``."""
    return RigorousReal.exact(Fraction(8 * n + 3, 12), prec).sqrt() - Fraction(3, 2)


def lemma_bound(n: int, prec: int) -> RigorousReal:
    return lemma_exponent(n, prec).exp2()


def remark_exponent(n: int) -> int:
    """``floor(sqrt(2n/3 + 1/4) - 1/2)`` in exact integer arithmetic.

    ``sqrt(x) - 1/2 >= m``  iff  ``(2m+1)^2 <= 4x = (8n+3)/3``.
    """
    return (isqrt((8 * n + 3) // 3) - 1) // 2


def check_p_lower_bound(k: KIndex, n_max: int, variant: str = LEMMA, *,
                        table: Optional[PartitionTable] = None, cache_dir=None) -> BoundReport:
    k = check_k(k)
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if variant not in (LEMMA, REMARK):
        raise ValueError(f"unknown variant {variant!r}")
    if table is None:
        table = get_table(k, n_max, cache_dir)
    elif table.k != k:
        raise ValueError("table built for a different k")
    p = table.truncated(n_max).values
    report = BoundReport(f"p_lower_bound_{variant} k={format_k(k)}", (1, n_max), True)
    for n in range(1, n_max + 1):
        if variant == REMARK:
            ok = p[n] >= 1 << remark_exponent(n)
        else:
            ok, bits = _compare(p[n], lambda prec: lemma_bound(n, prec), strict_upper=True)
            report.max_precision_bits_used = max(report.max_precision_bits_used, bits)
        if not ok:
            report.counterexamples.append(n)
    _finish(report)
    return report


def check_bound_consistency(n_max: int) -> BoundReport:
    """Certify that the lemma exponent never exceeds the remark exponent."""
    report = BoundReport("lemma_le_remark", (1, n_max), True)
    for n in range(1, n_max + 1):
        m = remark_exponent(n)
        ok, bits = _compare(m, lambda prec: lemma_exponent(n, prec), strict_upper=True)
        report.max_precision_bits_used = max(report.max_precision_bits_used, bits)
        if not ok:
            report.counterexamples.append(n)
    _finish(report)
    return report


def final_expression(a: int, prec: int) -> RigorousReal:
    """Enclosure of ``-48 a^2 (1 + ln 2a) + 2^(sqrt(2(a-1)/3 + 1/4) - 3/2)``."""
    growth = (RigorousReal.exact(Fraction(8 * a - 5, 12), prec).sqrt() - Fraction(3, 2)).exp2()
    poly = (RigorousReal.exact(2 * a, prec).ln() + 1) * (48 * a * a)
    return growth - poly


def final_expression_sign(a: int) -> tuple[DeltaSign, int]:
    """Certified sign of the final bracket and the precision it needed."""
    if a < 2:
        raise ValueError(f"a must be >= 2, got {a}")
    s, bits = certified_sign(lambda prec: final_expression(a, prec))
    return DeltaSign.of(s), bits


def smallest_positive_a(a_from: int = 2, a_to: int = FINAL_FROM) -> Optional[int]:
    """First a in ``[a_from, a_to]`` where the bracket is certified positive."""
    for a in range(a_from, a_to + 1):
        if final_expression_sign(a)[0] is DeltaSign.POSITIVE:
            return a
    return None


def final_expression_scan(a_from: int, a_to: int) -> BoundReport:
    """Certify positivity of the bracket on ``[a_from, a_to]`` and that it is nondecreasing there."""
    if a_from < FINAL_FROM:
        raise ValueError(f"the scan starts at a >= {FINAL_FROM}, got {a_from}")
    if a_to < a_from:
        raise ValueError("empty range")
    report = BoundReport("final_expression", (a_from, a_to), True)
    bits_used = START_BITS

    def value(a: int, prec: int) -> RigorousReal:
        return final_expression(a, prec)

    prev = value(a_from, START_BITS)
    for a in range(a_from, a_to + 1):
        cur = prev
        bits = START_BITS
        while cur.sign() is None:
            if bits >= MAX_BITS:
                raise PrecisionExhaustedError(f"sign at a={a} undecided at {bits} bits")
            bits *= 2
            cur = value(a, bits)
        bits_used = max(bits_used, bits)
        if cur.sign() < 0:
            report.counterexamples.append(a)
        if a == a_to:
            break
        nxt = value(a + 1, START_BITS)
        step, bits = nxt - prev, START_BITS
        while step.sign() is None:
            if bits >= MAX_BITS:
                raise PrecisionExhaustedError(f"monotonicity at a={a} undecided at {bits} bits")
            bits *= 2
            step = value(a + 1, bits) - value(a, bits)
        bits_used = max(bits_used, bits)
        if step.sign() < 0:
            report.counterexamples.append(a)
        prev = nxt
    report.max_precision_bits_used = bits_used
    _finish(report)
    return report


def _finish(report: BoundReport) -> None:
    if report.counterexamples:
        report.result = False
        report.first_failure = report.counterexamples[0]
