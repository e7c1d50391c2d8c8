"""On-disk cache of partition tables.

File layout (UTF-8, LF)::

    RPKT 1
    k=<decimal|inf> nmax=<decimal>
    p_k(0)
    ...
    p_k(nmax)
"""

from __future__ import annotations

import os
import re
import tempfile
from pathlib import Path

from .arith import (
    INF,
    KIndex,
    PartitionTable,
    build_table_recurrence,
    check_k,
    format_k,
)
from .errors import CacheCorruptError, CacheMismatchError

MAGIC = "RPKT 1"
ENV_VAR = "REGPART_CACHE"
_HEADER = re.compile(r"k=(inf|[0-9]+) nmax=([0-9]+)")
_DECIMAL = re.compile(r"[0-9]+")


def save_table(table: PartitionTable, path: str | os.PathLike) -> None:
    """Write ``table`` atomically (temp file + rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [MAGIC, f"k={format_k(table.k)} nmax={table.n_max}"]
    lines.extend(str(v) for v in table.values)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_header(path: str | os.PathLike) -> tuple[KIndex, int]:
    with open(path, encoding="utf-8", newline="") as fh:
        magic = fh.readline()
        header = fh.readline()
    return _parse_header(magic, header, path)


def _parse_header(magic: str, header: str, path) -> tuple[KIndex, int]:
    if magic.rstrip("\n") != MAGIC:
        if magic.startswith("RPKT "):
            raise CacheMismatchError(f"{path}: unsupported cache version {magic.strip()!r}")
        raise CacheCorruptError(f"{path}: bad magic line")
    m = _HEADER.fullmatch(header.rstrip("\n"))
    if m is None:
        raise CacheCorruptError(f"{path}: bad header line")
    k = INF if m.group(1) == "inf" else int(m.group(1))
    return k, int(m.group(2))


def load_table(
    k: KIndex, n_max: int, path: str | os.PathLike, *, allow_longer: bool = False
) -> PartitionTable:
    """Load and validate a cached table.

    With ``allow_longer`` a cached table longer than ``n_max`` is accepted and
    truncated; otherwise the stored ``nmax`` must match exactly.
    """
    k = check_k(k)
    try:
        text = Path(path).read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CacheCorruptError(f"{path}: not UTF-8") from exc
    lines = text.split("\n")
    if len(lines) < 3 or lines[-1] != "":
        raise CacheCorruptError(f"{path}: truncated file")
    lines.pop()
    stored_k, stored_n = _parse_header(lines[0], lines[1], path)
    if stored_k != k:
        raise CacheMismatchError(f"{path}: holds k={format_k(stored_k)}, wanted k={format_k(k)}")
    if stored_n != n_max and not (allow_longer and stored_n > n_max):
        raise CacheMismatchError(f"{path}: holds nmax={stored_n}, wanted nmax={n_max}")
    body = lines[2:]
    if len(body) != stored_n + 1:
        raise CacheCorruptError(f"{path}: expected {stored_n + 1} values, found {len(body)}")
    for i, line in enumerate(body):
        if not _DECIMAL.fullmatch(line):
            raise CacheCorruptError(f"{path}: line {i + 3} is not a nonnegative integer")
    values = tuple(int(v) for v in body[: n_max + 1])
    try:
        return PartitionTable(k, values)
    except ValueError as exc:
        raise CacheCorruptError(f"{path}: {exc}") from exc


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "regpart"


def cache_path(cache_dir: str | os.PathLike, k: KIndex) -> Path:
    return Path(cache_dir) / f"p_k{format_k(k)}.rpkt"


def get_table(k: KIndex, n_max: int, cache_dir: str | os.PathLike | None = None) -> PartitionTable:
    """Return ``p_k(0..n_max)``, reusing a cached table when it is long enough.

    Without ``cache_dir`` the table is simply built. A shorter cached table is
    replaced by the newly built one; a corrupt one raises.
    """
    k = check_k(k)
    if cache_dir is None:
        return build_table_recurrence(k, n_max)
    path = cache_path(cache_dir, k)
    if path.exists():
        _, stored_n = read_header(path)
        if stored_n >= n_max:
            return load_table(k, n_max, path, allow_longer=True)
    table = build_table_recurrence(k, n_max)
    save_table(table, path)
    return table
