"""Reference exception tables shipped with the package (hand transcribed)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .arith import INF, KIndex, check_k, format_k

Pair = tuple[int, int]


@dataclass(frozen=True)
class GoldenExceptions:
    equality: frozenset[Pair]
    reversed: frozenset[Pair]
    families: tuple[tuple[int, int], ...]  # (a0, b_from)


def _read(name: str) -> str:
    return resources.files("regpart").joinpath("data", name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def _bo_data() -> dict:
    return json.loads(_read("bo_exceptions.json"))


def bo_exceptions(k: KIndex) -> GoldenExceptions:
    """Known E_k / F_k. For k >= 10 these coincide with the k = inf sets."""
    k = check_k(k)
    key = "inf" if k == INF or k >= 10 else format_k(k)
    entry = _bo_data()["tables"][key]
    return GoldenExceptions(
        frozenset(tuple(p) for p in entry["equality"]),
        frozenset(tuple(p) for p in entry["reversed"]),
        tuple(tuple(f) for f in entry["families"]),
    )


def thresholds() -> dict[int, tuple[int, int]]:
    """``k -> (n_k, m_k)`` for 2 <= k <= 6."""
    return {int(k): tuple(v) for k, v in _bo_data()["thresholds"].items()}


@lru_cache(maxsize=None)
def table3() -> dict[int, frozenset[int]]:
    """Row ``n`` -> set of k (2..20) at which p_k fails log-concavity at n."""
    rows: dict[int, frozenset[int]] = {}
    for line in _read("table3.txt").splitlines():
        if not line or line.startswith("#"):
            continue
        n, _, ks = line.partition(":")
        rows[int(n)] = frozenset(int(k) for k in ks.split())
    return rows


TABLE3_K = range(2, 21)
TABLE3_N = range(1, 46)
