"""Independent reference counts used to freeze expected values.

Nothing here imports the package: partitions are generated as explicit
multisets and filtered afterwards.
"""

from functools import lru_cache
from math import inf


@lru_cache(maxsize=None)
def all_partitions(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in all_partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def count_regular(k, n):
    """Partitions of n with no part divisible by k (k = inf: all partitions)."""
    if k == inf:
        return len(all_partitions(n))
    return sum(1 for lam in all_partitions(n) if all(part % k for part in lam))


def count_distinct_parts(n):
    """Partitions of n into distinct parts by 0/1 knapsack counting."""
    ways = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(n, part - 1, -1):
            ways[total] += ways[total - part]
    return ways[n]
