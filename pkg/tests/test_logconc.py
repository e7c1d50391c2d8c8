import json

import pytest

from regpart import logconc
from regpart.arith import INF, build_table_recurrence
from regpart.errors import TableRangeError
from regpart.logconc import (
    conjecture_scan,
    diff_grids,
    emit_table3,
    enumerate_failures,
    golden_table3,
    logconc_defect,
)

from oracle import count_regular

ODD_TO_25 = list(range(1, 26, 2))


@pytest.fixture(scope="module")
def p_inf():
    return build_table_recurrence(INF, 1001)


def test_defect_examples(p_inf):
    p = [count_regular(INF, n) for n in range(4)]
    assert p[2] ** 2 - p[1] * p[3] == 1
    assert logconc_defect(p_inf, 2) == 1
    assert logconc_defect(p_inf, 3) < 0
    assert logconc_defect(build_table_recurrence(2, 10), 2) < 0


def test_defect_range(p_inf):
    with pytest.raises(TableRangeError):
        logconc_defect(p_inf, 0)
    with pytest.raises(TableRangeError):
        logconc_defect(p_inf, 1001)


def test_n1_fails_whenever_p_k_2_is_2():
    for k in range(3, 30):
        t = build_table_recurrence(k, 5)
        assert t[2] == 2
        assert logconc_defect(t, 1) == 1 - t[2]


def test_failures_of_p(p_inf):
    rep = enumerate_failures(p_inf, 100)
    assert rep.failures == ODD_TO_25
    assert rep.estimated_N_k == 26
    assert rep.horizon_caveat


def test_failures_k3():
    rep = enumerate_failures(build_table_recurrence(3, 101), 100)
    assert rep.failures == list(range(1, 58, 2))
    assert rep.estimated_N_k == 58


def test_failures_k2_within_table_range():
    rep = enumerate_failures(build_table_recurrence(2, 46), 45)
    assert rep.failures == [2, 4, 8, 11, 13, 14, 16, 17, 19, 20, 23, 26, 29, 32]


def test_failures_range_check(p_inf):
    with pytest.raises(TableRangeError):
        enumerate_failures(p_inf, 1001)


def test_no_failures_estimate_is_one():
    rep = logconc.LogConcavityReport(5, 10, [])
    assert rep.estimated_N_k == 1


def test_even_indices_never_fail_for_p(p_inf):
    assert all(logconc_defect(p_inf, n) >= 0 for n in range(2, 101, 2))


@pytest.mark.parametrize("k", [2, 3, 7, 30, INF])
def test_failures_rederive(k):
    t = build_table_recurrence(k, 301)
    fails = set(enumerate_failures(t, 300).failures)
    for n in range(1, 301):
        assert (logconc_defect(t, n) < 0) == (n in fails)


def test_report_json():
    d = json.loads(json.dumps(enumerate_failures(build_table_recurrence(INF, 101), 100).to_dict()))
    assert d == {"k": "inf", "n_max": 100, "failures": ODD_TO_25, "estimated_N_k": 26,
                 "horizon_caveat": True}


def test_conjecture_examples():
    assert conjecture_scan(31, 31, 100).reports[0].failures == ODD_TO_25
    rep = conjecture_scan(2, 2, 1000)
    assert rep.mismatched == [2]
    assert rep.contradictions == []


def test_conjecture_preconditions():
    with pytest.raises(ValueError):
        conjecture_scan(1, 5, 100)
    with pytest.raises(ValueError):
        conjecture_scan(30, 40, 99)


def test_empirical_stabilization_point():
    rep = conjecture_scan(2, 40, 200)
    assert rep.stabilization_k == 30
    assert rep.contradictions == []
    # k = 29: p_29(29) = p(29) - 1 tips n = 29 into a failure
    k29 = next(r for r in rep.reports if r.k == 29)
    assert k29.failures == ODD_TO_25 + [29]


def test_table3_cells():
    grid = emit_table3()
    assert not grid.cells[9, 8]
    assert not grid.cells[27, 16] and grid.cells[27, 17]
    assert not any(grid.cells[6, k] for k in grid.ks)


def test_table3_matches_golden():
    assert diff_grids(emit_table3(), golden_table3()) == []


def test_table3_parallel_identical():
    assert emit_table3(jobs=1).to_csv() == emit_table3(jobs=3).to_csv()


def test_grid_csv_layout():
    csv_text = emit_table3().to_csv().splitlines()
    assert csv_text[0] == "n," + ",".join(str(k) for k in range(2, 21))
    assert csv_text[2] == "2,1" + "," * 18
    assert len(csv_text) == 46


def test_golden_table3_k3_column_is_odd():
    g = golden_table3()
    assert [n for n in g.ns if g.cells[n, 3]] == list(range(1, 46, 2))
