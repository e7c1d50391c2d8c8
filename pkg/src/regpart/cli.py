"""Command line front end.

Exit codes: 0 ok, 1 mismatch or violation, 2 bad configuration,
3 cache corruption, 4 precision exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import bo, bounds, logconc
from .arith import INF, KIndex, format_k, parse_k
from .cache import ENV_VAR, default_cache_dir, get_table
from .errors import CacheError, CampaignAborted, PrecisionExhaustedError

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG, EXIT_CACHE, EXIT_PRECISION = 0, 1, 2, 3, 4
FORMATS = ("json", "csv", "markdown")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    k_from: Optional[KIndex]
    k_to: Optional[KIndex]
    n_max: Optional[int]
    sum_bound: Optional[int]
    fmt: str
    cache_dir: Path
    jobs: int
    n0: Optional[int]


def parse_k_range(text: str) -> tuple[KIndex, KIndex]:
    """``"5"``, ``"inf"`` or ``"lo..hi"``."""
    if ".." in text:
        lo, _, hi = text.partition("..")
        a, b = parse_k(lo), parse_k(hi)
        if b < a:
            raise ValueError(f"empty k range {text!r}")
        return a, b
    k = parse_k(text)
    return k, k


def _config(args: argparse.Namespace) -> RunConfig:
    k_from = k_to = None
    if getattr(args, "k", None) is not None:
        try:
            k_from, k_to = parse_k_range(args.k)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    for name in ("n_max", "sum_bound", "n0", "k_max"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            raise ConfigError(f"--{name.replace('_', '-')} must be >= 0")
    env = os.environ.get(ENV_VAR)
    cache_dir = Path(env) if env else (Path(args.cache_dir) if args.cache_dir else default_cache_dir())
    return RunConfig(args.command, k_from, k_to, getattr(args, "n_max", None),
                     getattr(args, "sum_bound", None), args.format or "", cache_dir, args.jobs,
                     getattr(args, "n0", None))


def _finite_range(cfg: RunConfig, default: tuple[int, int]) -> range:
    lo, hi = (cfg.k_from, cfg.k_to) if cfg.k_from is not None else default
    if hi == INF:
        raise ConfigError("this command needs a finite k range")
    return range(int(lo), int(hi) + 1)


def _emit(payload, fmt: str, markdown: Optional[str] = None, csv_text: Optional[str] = None) -> None:
    if fmt == "markdown" and markdown is not None:
        sys.stdout.write(markdown)
    elif fmt == "csv" and csv_text is not None:
        sys.stdout.write(csv_text)
    else:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


# -- table -------------------------------------------------------------------

def cmd_table(cfg: RunConfig) -> int:
    if cfg.k_from is None or cfg.k_from != cfg.k_to:
        raise ConfigError("table needs a single --k")
    if cfg.n_max is None:
        raise ConfigError("table needs --n-max")
    t = get_table(cfg.k_from, cfg.n_max, cfg.cache_dir)
    out = sys.stdout
    if cfg.fmt == "json":
        out.write(json.dumps({"k": format_k(t.k), "n_max": t.n_max,
                              "values": [str(v) for v in t.values]}) + "\n")
    elif cfg.fmt == "csv":
        out.write("n,p\n" + "".join(f"{n},{v}\n" for n, v in enumerate(t.values)))
    elif cfg.fmt == "markdown":
        out.write("| n | p |\n|---|---|\n" + "".join(f"| {n} | {v} |\n" for n, v in enumerate(t.values)))
    else:
        out.write("".join(f"{n} {v}\n" for n, v in enumerate(t.values)))
    return EXIT_OK


# -- reproduce ---------------------------------------------------------------

def _reproduce_bo(cfg: RunConfig, ks: Sequence[KIndex], sum_bound: int) -> int:
    reports = [bo.enumerate_exceptions(get_table(k, sum_bound, cfg.cache_dir), sum_bound) for k in ks]
    diffs = [d for r in reports for d in bo.compare_with_golden(r)]
    _emit({"reports": [r.to_dict() for r in reports], "match": not diffs, "differences": diffs},
          cfg.fmt or "markdown", markdown=bo.exceptions_markdown(reports))
    if diffs:
        print(f"MISMATCH: {diffs[0]}", file=sys.stderr)
        return EXIT_MISMATCH
    print("match", file=sys.stderr)
    return EXIT_OK


def _reproduce_table3(cfg: RunConfig) -> int:
    grid = logconc.emit_table3(cache_dir=cfg.cache_dir, jobs=cfg.jobs)
    diffs = logconc.diff_grids(grid, logconc.golden_table3())
    payload = {"rows": {str(n): [k for k in grid.ks if grid.cells[n, k]] for n in grid.ns},
               "match": not diffs}
    _emit(payload, cfg.fmt or "markdown", markdown=grid.to_markdown(), csv_text=grid.to_csv())
    if diffs:
        n, k, got, want = diffs[0]
        print(f"MISMATCH at n={n}, k={k}: computed {'bullet' if got else 'blank'}, "
              f"table has {'bullet' if want else 'blank'}", file=sys.stderr)
        return EXIT_MISMATCH
    print("match", file=sys.stderr)
    return EXIT_OK


def _reproduce_thresholds(cfg: RunConfig) -> int:
    bound = cfg.sum_bound or 1000
    results = [bo.check_thresholds(get_table(k, bound, cfg.cache_dir), k, bound) for k in range(2, 7)]
    md = ["| k | n_k | m_k | checked up to a+b | pairs | result |", "|---|---|---|---|---|---|"]
    md += [f"| {r.k} | {r.n_k} | {r.m_k} | {r.sum_bound} | {r.pairs_checked} | "
           f"{'pass' if r.passed else 'FAIL'} |" for r in results]
    _emit({"results": [r.to_dict() for r in results]}, cfg.fmt or "markdown", markdown="\n".join(md) + "\n")
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"MISMATCH: k={failed[0].k} violated at {failed[0].violations[0]}", file=sys.stderr)
        return EXIT_MISMATCH
    print("match", file=sys.stderr)
    return EXIT_OK


def cmd_reproduce(cfg: RunConfig, which: str) -> int:
    bound = cfg.sum_bound or 200
    if which == "table1":
        return _reproduce_bo(cfg, range(2, 7), bound)
    if which == "table2":
        return _reproduce_bo(cfg, range(7, 11), bound)
    if which == "theorem1":
        return _reproduce_bo(cfg, [INF], bound)
    if which == "table3":
        return _reproduce_table3(cfg)
    if which == "thresholds":
        return _reproduce_thresholds(cfg)
    raise ConfigError(f"unknown table {which!r}")


# -- verify ------------------------------------------------------------------

def _verify_bo(cfg: RunConfig) -> int:
    ks = _finite_range(cfg, (10, 60))
    bound = cfg.sum_bound or 300
    try:
        rep = bo.stabilization_scan(ks.start, ks.stop - 1, bound, cache_dir=cfg.cache_dir, jobs=cfg.jobs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    _emit(rep.to_dict(), cfg.fmt or "json")
    return EXIT_OK if rep.all_equal else EXIT_MISMATCH


def _verify_logconc(cfg: RunConfig) -> int:
    ks = _finite_range(cfg, (30, 100))
    n_max = cfg.n_max or 1000
    try:
        rep = logconc.conjecture_scan(ks.start, ks.stop - 1, n_max, cache_dir=cfg.cache_dir, jobs=cfg.jobs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    _emit(rep.to_dict(), cfg.fmt or "json")
    return EXIT_OK if not rep.mismatched else EXIT_MISMATCH


def _verify_bounds(cfg: RunConfig, args: argparse.Namespace) -> int:
    if cfg.k_from is not None:
        if cfg.k_from != cfg.k_to:
            raise ConfigError("verify bounds takes a single --k")
        g_ks = p_ks = [cfg.k_from]
    else:
        g_ks, p_ks = [2, 3, 5, INF], [2, 4, 10, INF]
    g_n = cfg.n_max or 10_000
    p_n = cfg.n_max or 2000
    reports = [bounds.check_g_bound(k, g_n) for k in g_ks]
    for k in p_ks:
        table = get_table(k, p_n, cfg.cache_dir)
        reports += [bounds.check_p_lower_bound(k, p_n, v, table=table) for v in (bounds.LEMMA, bounds.REMARK)]
    sign, bits = bounds.final_expression_sign(bounds.FINAL_FROM)
    reports.append(bounds.BoundReport("final_expression_sign", (bounds.FINAL_FROM, bounds.FINAL_FROM),
                                      sign is bo.DeltaSign.POSITIVE, None, bits))
    reports.append(bounds.final_expression_scan(bounds.FINAL_FROM, args.a_max))
    _emit({"reports": [r.to_dict() for r in reports]}, cfg.fmt or "json")
    return EXIT_OK if all(r.result for r in reports) else EXIT_MISMATCH


def _verify_campaign(cfg: RunConfig, args: argparse.Namespace) -> int:
    params = bo.VerificationParams.for_class(args.k_class)
    if cfg.n0 is None and not args.full:
        raise ConfigError("the full-scale campaign scans billions of pairs; pass --n0 or --full")
    k_max = args.k_max if args.k_max is not None else (cfg.n0 or params.N0)
    try:
        rep = bo.induction_campaign(params, k_max, cfg.n0, exclusions=not args.no_exclusions,
                                    cache_dir=cfg.cache_dir, jobs=cfg.jobs,
                                    time_budget=args.time_budget)
    except CampaignAborted as exc:
        _emit(exc.partial.to_dict(), cfg.fmt or "json")
        print(f"aborted: {exc}; rerun to resume", file=sys.stderr)
        return EXIT_MISMATCH
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    _emit(rep.to_dict(), cfg.fmt or "json")
    return EXIT_OK if rep.ok else EXIT_MISMATCH


def cmd_verify(cfg: RunConfig, args: argparse.Namespace) -> int:
    scope = args.scope
    if scope == "bo":
        return _verify_bo(cfg)
    if scope == "logconc":
        return _verify_logconc(cfg)
    if scope == "bounds":
        return _verify_bounds(cfg, args)
    return _verify_campaign(cfg, args)


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", help=f"table cache directory (env {ENV_VAR} overrides)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--format", choices=FORMATS + ("text",), default=None)

    parser = argparse.ArgumentParser(prog="regpart", description="k-regular partition inequalities, verified exactly.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", parents=[common], help="print p_k(0..n_max)")
    p.add_argument("--k", required=True, help='integer >= 2 or "inf"')
    p.add_argument("--n-max", type=int, required=True)

    p = sub.add_parser("reproduce", parents=[common], help="recompute a published table and diff it")
    p.add_argument("which", choices=("table1", "table2", "table3", "theorem1", "thresholds"))
    p.add_argument("--sum-bound", type=int)

    p = sub.add_parser("verify", parents=[common], help="run a verification scan")
    p.add_argument("scope", choices=("bo", "logconc", "bounds", "campaign"))
    p.add_argument("--k", help='k, "inf" or "lo..hi"')
    p.add_argument("--n-max", type=int)
    p.add_argument("--sum-bound", type=int)
    p.add_argument("--n0", type=int, help="campaign: override N0 (scaled-down run)")
    p.add_argument("--k-max", type=int, help="campaign: largest k")
    p.add_argument("--k-class", choices=(">3", "2", "3"), default=">3",
                   help="campaign: constant set (A, B, N0)")
    p.add_argument("--full", action="store_true", help="campaign: run with the full N0 of the chosen class")
    p.add_argument("--no-exclusions", action="store_true",
                   help="campaign: scan every pair and report all nonpositive Delta")
    p.add_argument("--time-budget", type=float, help="campaign: abort (resumably) after this many seconds")
    p.add_argument("--a-max", type=int, default=100_000, help="bounds: end of the final-expression scan")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "table":
            return cmd_table(cfg)
        if args.command == "reproduce":
            return cmd_reproduce(cfg, args.which)
        return cmd_verify(cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CacheError as exc:
        print(f"cache error: {exc}", file=sys.stderr)
        return EXIT_CACHE
    except PrecisionExhaustedError as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    raise SystemExit(main())
