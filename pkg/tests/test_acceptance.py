"""End-to-end acceptance checks, one test per criterion.

Each test times its own work against a fresh (uncached) run and records a
single PASS/FAIL line that is printed in the terminal summary.
"""

import time
from contextlib import contextmanager

from regpart import bo, bounds, golden, logconc
from regpart.arith import (
    BOUNDED_MULTIPLICITY,
    FORBIDDEN_MULTIPLES,
    INF,
    brute_force_count,
    build_table_recurrence,
    build_table_series,
    g_values,
)
from regpart.bo import DeltaSign, VerificationParams
from regpart.cache import load_table, save_table
from regpart.cli import main

from oracle import count_regular

E_INF = {(2, 6), (2, 7), (3, 4)}
F_INF = {(2, 2), (2, 3), (2, 4), (2, 5), (3, 3), (3, 5)}
ODD_TO_25 = list(range(1, 26, 2))


@contextmanager
def criterion(log, number, title, limit=None):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        line = f"CRITERION {number} FAIL  {title}: {type(exc).__name__}: {exc}"
        log.append(line)
        print(line)
        raise
    elapsed = time.perf_counter() - start
    ok = limit is None or elapsed < limit
    budget = f" (limit {limit:g} s)" if limit is not None else ""
    line = f"CRITERION {number} {'PASS' if ok else 'FAIL'}  {title}: {elapsed:.2f} s{budget}"
    log.append(line)
    print(line)
    assert ok, line


def test_criterion_1_theorem1(acceptance_log):
    with criterion(acceptance_log, 1, "exceptions for k=inf at sum bound 200", 1.0):
        rep = bo.enumerate_exceptions(build_table_recurrence(INF, 200), 200)
        assert rep.equality_set() == E_INF
        assert rep.reversed_set() == F_INF
        assert rep.infinite_families == []


def test_criterion_2_tables_1_and_2(acceptance_log):
    with criterion(acceptance_log, 2, "exception sets for 2 <= k <= 10 at sum bound 200", 5.0):
        for k in range(2, 11):
            rep = bo.enumerate_exceptions(build_table_recurrence(k, 200), 200)
            assert bo.compare_with_golden(rep) == [], k
            if k == 2:
                (fam,) = rep.infinite_families
                assert (fam.a0, fam.b_from, fam.sign) == (2, 2, DeltaSign.NEGATIVE)
                assert fam.verified_to == 198
            else:
                assert rep.infinite_families == []


def test_criterion_3_thresholds(acceptance_log):
    with criterion(acceptance_log, 3, "thresholds for k = 2..6 up to a+b = 1000", 30.0):
        for k in range(2, 7):
            res = bo.check_thresholds(build_table_recurrence(k, 1000), k, 1000)
            assert (res.n_k, res.m_k) == golden.thresholds()[k]
            assert res.passed, res.violations[:3]
            assert res.pairs_checked > 0


def test_criterion_4_stabilization(acceptance_log):
    with criterion(acceptance_log, 4, "E_k, F_k equal the k=inf sets for 10 <= k <= 60 at 500", 120.0):
        rep = bo.stabilization_scan(10, 60, 500)
        assert [r.k for r in rep.rows] == list(range(10, 61))
        assert rep.all_equal, [r for r in rep.rows if not r.equal][:3]


def test_criterion_5_scaled_campaign(acceptance_log):
    with criterion(acceptance_log, 5, "scaled induction campaign, N0 = 300, k <= 50"):
        rep = bo.induction_campaign(VerificationParams.for_class(">3"), 50, 300)
        assert rep.complete
        assert [r.k for r in rep.rows] == list(range(4, 51))
        assert rep.unexpected == 0
        assert rep.ok
        for cls in ("2", "3"):
            small = bo.induction_campaign(VerificationParams.for_class(cls), int(cls), 300)
            assert small.unexpected == 0 and small.ok


def test_criterion_6_table3(acceptance_log):
    with criterion(acceptance_log, 6, "log-concavity grid and failure sets", 5.0):
        assert logconc.diff_grids(logconc.emit_table3(), logconc.golden_table3()) == []
        rep = logconc.enumerate_failures(build_table_recurrence(INF, 101), 100)
        assert rep.failures == ODD_TO_25
        assert rep.estimated_N_k == 26
        rep = logconc.enumerate_failures(build_table_recurrence(3, 101), 100)
        assert rep.failures == list(range(1, 58, 2))


def test_criterion_7_conjecture_scan(acceptance_log):
    with criterion(acceptance_log, 7, "failures are odd 1..25 for 30 <= k <= 100, n <= 1000", 180.0):
        rep = logconc.conjecture_scan(30, 100, 1000)
        assert [r.k for r in rep.reports] == list(range(30, 101))
        assert all(r.failures == ODD_TO_25 for r in rep.reports)
        assert rep.mismatched == [] and rep.contradictions == []


def test_criterion_8_bounds(acceptance_log):
    with criterion(acceptance_log, 8, "rigorous bound checks", 120.0):
        reports = [bounds.check_g_bound(k, 10_000) for k in (2, 3, 5, INF)]
        for k in (2, 4, 10, INF):
            t = build_table_recurrence(k, 2000)
            reports += [bounds.check_p_lower_bound(k, 2000, v, table=t) for v in (bounds.LEMMA, bounds.REMARK)]
        assert bounds.final_expression_sign(1470)[0] is DeltaSign.POSITIVE
        reports.append(bounds.final_expression_scan(1470, 100_000))
        bad = [r.to_dict() for r in reports if not r.result]
        assert bad == []
        # any exhaustion would have raised; every report stayed under the cap
        assert all(r.max_precision_bits_used <= bounds.MAX_BITS for r in reports)


def test_criterion_9_oracle_suite(acceptance_log, tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("REGPART_CACHE", raising=False)
    with criterion(acceptance_log, 9, "oracles, divisibility, cache round trip, jobs determinism"):
        ks = list(range(2, 13)) + [INF]
        for k in ks:
            rec, ser = build_table_recurrence(k, 40), build_table_series(k, 40)
            assert rec == ser, k
            for n in range(41):
                assert brute_force_count(k, n, FORBIDDEN_MULTIPLES) == rec[n], (k, n)
                if k != INF:
                    assert brute_force_count(k, n, BOUNDED_MULTIPLICITY) == rec[n], (k, n)
            assert [count_regular(k, n) for n in range(26)] == list(rec.values[:26])

        # n p_k(n) = sum g_k(l) p_k(n-l) must divide exactly for every table built here
        for k in ks + [13, 50, 500]:
            t = build_table_recurrence(k, 600)
            g = g_values(k, 600)
            for n in range(1, 601):
                s = sum(g[l] * t[n - l] for l in range(1, n + 1))
                assert s == n * t[n]

        for k in (2, 7, INF):
            t = build_table_recurrence(k, 500)
            path = tmp_path / f"rt_{k}.rpkt"
            save_table(t, path)
            assert load_table(k, 500, path) == t

        outs = []
        for jobs in ("1", "8"):
            argv = ["reproduce", "table3", "--format", "csv", "--jobs", jobs,
                    "--cache-dir", str(tmp_path / f"j{jobs}")]
            assert main(argv) == 0
            outs.append(capsys.readouterr().out)
            argv = ["verify", "campaign", "--n0", "150", "--k-max", "40", "--jobs", jobs,
                    "--cache-dir", str(tmp_path / f"j{jobs}")]
            assert main(argv) == 0
            outs.append(capsys.readouterr().out)
        assert outs[0] == outs[2] and outs[1] == outs[3]
