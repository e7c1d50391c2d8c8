"""Exact sigma, g_k and k-regular partition numbers p_k(n).

Three independent routes produce p_k(0..N):

* :func:`build_table_recurrence` -- ``n p_k(n) = sum_l g_k(l) p_k(n-l)``
* :func:`build_table_series` -- truncated product ``prod (1-q^{kn})/(1-q^n)``
* :func:`brute_force_count` -- explicit enumeration of partitions (small n)

``k`` is either an integer >= 2 or :data:`INF`; ``p_inf`` is the ordinary
partition function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import isqrt
from operator import mul
from typing import Iterator, Sequence, Union

from .errors import ArithmeticConsistencyError, TableRangeError

INF = math.inf
KIndex = Union[int, float]

BRUTE_FORCE_LIMIT = 60
FORBIDDEN_MULTIPLES = "forbidden-multiples"
BOUNDED_MULTIPLICITY = "bounded-multiplicity"


def check_k(k: KIndex) -> KIndex:
    """Validate a k index and return it normalized (int or INF)."""
    if isinstance(k, bool):
        raise ValueError(f"invalid k: {k!r}")
    if isinstance(k, float):
        if k == INF:
            return INF
        raise ValueError(f"k must be an integer >= 2 or inf, got {k!r}")
    if not isinstance(k, int):
        raise ValueError(f"k must be an integer >= 2 or inf, got {k!r}")
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return k


def parse_k(text: str) -> KIndex:
    t = text.strip().lower()
    if t in ("inf", "infinity", "oo"):
        return INF
    try:
        return check_k(int(t))
    except ValueError:
        raise ValueError(f"invalid k: {text!r}") from None


def format_k(k: KIndex) -> str:
    return "inf" if k == INF else str(int(k))


def sigma(n: int) -> int:
    """Sum of the positive divisors of ``n`` (trial division up to sqrt n)."""
    if n < 1:
        raise ValueError(f"sigma needs n >= 1, got {n}")
    total = 0
    r = isqrt(n)
    for d in range(1, r + 1):
        if n % d == 0:
            total += d
            e = n // d
            if e != d:
                total += e
    return total


def g_k(k: KIndex, n: int) -> int:
    """``sigma(n) - k*sigma(n/k)``, where sigma of a non-integer is 0."""
    k = check_k(k)
    if n < 1:
        raise ValueError(f"g_k needs n >= 1, got {n}")
    s = sigma(n)
    if k != INF and n % k == 0:
        s -= k * sigma(n // k)
    return s


@dataclass(frozen=True)
class PartitionTable:
    """Immutable exact table ``p_k(0..n_max)``."""

    k: KIndex
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", check_k(self.k))
        if not isinstance(self.values, tuple):
            object.__setattr__(self, "values", tuple(self.values))
        if not self.values or self.values[0] != 1:
            raise ValueError("a partition table must start with p_k(0) = 1")

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> int:
        if not 0 <= n <= self.n_max:
            raise TableRangeError(
                f"n={n} outside table range 0..{self.n_max} (k={format_k(self.k)})")
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)

    def truncated(self, n_max: int) -> PartitionTable:
        if n_max > self.n_max:
            raise TableRangeError(f"cannot extend table from {self.n_max} to {n_max}")
        if n_max == self.n_max:
            return self
        return PartitionTable(self.k, self.values[: n_max + 1])


def g_values(k: KIndex, n_max: int) -> list[int]:
    """``[0, g_k(1), ..., g_k(n_max)]`` (index 0 is a placeholder)."""
    return [0] + [g_k(k, n) for n in range(1, n_max + 1)]


def build_table_recurrence(k: KIndex, n_max: int) -> PartitionTable:
    k = check_k(k)
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    g = g_values(k, n_max)
    p = [1]
    for n in range(1, n_max + 1):
        s = sum(map(mul, g[1 : n + 1], reversed(p)))
        q, r = divmod(s, n)
        if r:
            raise ArithmeticConsistencyError(
                f"recurrence sum {s} not divisible by n={n} (k={format_k(k)})")
        p.append(q)
    return PartitionTable(k, tuple(p))


def build_table_series(k: KIndex, n_max: int) -> PartitionTable:
    """Coefficients of ``prod_{m>=1} (1-q^{km}) / (1-q^m)`` modulo ``q^(n_max+1)``."""
    k = check_k(k)
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    c = [1] + [0] * n_max
    if k != INF:
        for step in range(k, n_max + 1, k):
            for i in range(n_max, step - 1, -1):
                c[i] -= c[i - step]
    for m in range(1, n_max + 1):
        for i in range(m, n_max + 1):
            c[i] += c[i - m]
    return PartitionTable(k, tuple(c))


def _generalized_pentagonals(limit: int) -> Iterator[tuple[int, int]]:
    """Yield ``(j(3j-1)/2, (-1)^j)`` for j = 0, 1, -1, 2, -2, ... up to ``limit``."""
    yield 0, 1
    j = 1
    while True:
        sign = -1 if j % 2 else 1
        first = j * (3 * j - 1) // 2
        if first > limit:
            return
        yield first, sign
        second = j * (3 * j + 1) // 2
        if second <= limit:
            yield second, sign
        j += 1


def build_table_from_partitions(k: KIndex, p: Sequence[int]) -> PartitionTable:
    """Derive ``p_k`` from a table of ordinary partition numbers.

    Uses Euler's pentagonal series for ``prod (1-q^{km})``, so each value
    costs O(sqrt(n/k)) additions. This is the fast path for scans over many k.
    """
    k = check_k(k)
    if k == INF:
        return PartitionTable(INF, tuple(p))
    n_max = len(p) - 1
    offsets = [(k * e, s) for e, s in _generalized_pentagonals(n_max // k)]
    out = []
    for n in range(n_max + 1):
        v = 0
        for off, s in offsets:
            if off > n:
                break
            v += s * p[n - off]
        out.append(v)
    return PartitionTable(k, tuple(out))


def _count_forbidden(n: int, largest: int, k: KIndex) -> int:
    # enumerate partitions of n with parts <= largest, none divisible by k
    if n == 0 or largest == 1:
        return 1
    total = 0
    for part in range(min(n, largest), 0, -1):
        if k != INF and part % k == 0:
            continue
        total += _count_forbidden(n - part, part, k)
    return total


def _count_bounded(n: int, largest: int, k: KIndex) -> int:
    # enumerate partitions of n with parts <= largest, each used at most k-1 times
    if n == 0:
        return 1
    if largest == 1:
        return 1 if k == INF or n <= k - 1 else 0
    if k != INF and n > (k - 1) * largest * (largest + 1) // 2:
        return 0
    cap = n // largest if k == INF else min(n // largest, k - 1)
    return sum(_count_bounded(n - m * largest, largest - 1, k) for m in range(cap + 1))


def brute_force_count(k: KIndex, n: int, mode: str = FORBIDDEN_MULTIPLES) -> int:
    """Count partitions of ``n`` by explicit enumeration.

    ``mode`` is ``"forbidden-multiples"`` (no part divisible by k) or
    ``"bounded-multiplicity"`` (every part used at most k-1 times).
    """
    k = check_k(k)
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_LIMIT}, got {n}")
    if mode == FORBIDDEN_MULTIPLES:
        return _count_forbidden(n, n, k)
    if mode == BOUNDED_MULTIPLICITY:
        return _count_bounded(n, n, k)
    raise ValueError(f"unknown mode {mode!r}")


def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield the partitions of ``n`` as nonincreasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 0, -1):
        for rest in partitions(n - part, part):
            yield (part,) + rest
