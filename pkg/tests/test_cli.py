import json

import pytest

from regpart.cache import cache_path, save_table
from regpart.arith import build_table_recurrence
from regpart.cli import main

from oracle import count_regular


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_table_text(capsys, cache_dir):
    code, out, _ = run(capsys, "table", "--k", "inf", "--n-max", "10", "--cache-dir", str(cache_dir))
    assert code == 0
    assert out.splitlines()[-1] == "10 42"
    code, out, _ = run(capsys, "table", "--k", "2", "--n-max", "10", "--cache-dir", str(cache_dir))
    assert out.splitlines()[-1] == "10 10"
    code, out, _ = run(capsys, "table", "--k", "3", "--n-max", "10", "--cache-dir", str(cache_dir))
    assert out.splitlines()[-1] == f"10 {count_regular(3, 10)}"


def test_table_formats(capsys, cache_dir):
    base = ("table", "--k", "4", "--n-max", "6", "--cache-dir", str(cache_dir))
    code, out, _ = run(capsys, *base, "--format", "json")
    assert json.loads(out) == {"k": "4", "n_max": 6, "values": [str(count_regular(4, n)) for n in range(7)]}
    code, out, _ = run(capsys, *base, "--format", "csv")
    assert out.splitlines()[0] == "n,p" and out.splitlines()[-1] == f"6,{count_regular(4, 6)}"
    code, out, _ = run(capsys, *base, "--format", "markdown")
    assert out.splitlines()[-1] == f"| 6 | {count_regular(4, 6)} |"


@pytest.mark.parametrize("argv", [
    ["table", "--k", "1", "--n-max", "5"],
    ["table", "--k", "two", "--n-max", "5"],
    ["table", "--k", "3..5", "--n-max", "5"],
    ["verify", "bo", "--k", "5..20"],
    ["verify", "logconc", "--k", "30..inf"],
    ["verify", "campaign"],
    ["table", "--k", "3", "--n-max", "5", "--jobs", "0"],
])
def test_config_errors_exit_2(capsys, cache_dir, argv):
    code, _, err = run(capsys, *argv, "--cache-dir", str(cache_dir))
    assert code == 2
    assert err.startswith("error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["reproduce", "table9"])
    assert info.value.code == 2


def test_corrupt_cache_exits_3(capsys, cache_dir):
    path = cache_path(cache_dir, 5)
    save_table(build_table_recurrence(5, 30), path)
    path.write_text(path.read_text()[:-6])
    code, _, err = run(capsys, "table", "--k", "5", "--n-max", "20", "--cache-dir", str(cache_dir))
    assert code == 3 and "cache" in err


def test_env_var_overrides_flag(capsys, tmp_path, monkeypatch):
    env_dir, flag_dir = tmp_path / "env", tmp_path / "flag"
    monkeypatch.setenv("REGPART_CACHE", str(env_dir))
    assert run(capsys, "table", "--k", "7", "--n-max", "12", "--cache-dir", str(flag_dir))[0] == 0
    assert cache_path(env_dir, 7).exists()
    assert not flag_dir.exists()


@pytest.mark.parametrize("which", ["table1", "table2", "theorem1", "table3", "thresholds"])
def test_reproduce_matches(capsys, cache_dir, which):
    code, out, err = run(capsys, "reproduce", which, "--cache-dir", str(cache_dir))
    assert code == 0
    assert err.strip() == "match"
    assert out


def test_reproduce_json(capsys, cache_dir):
    code, out, _ = run(capsys, "reproduce", "theorem1", "--format", "json", "--cache-dir", str(cache_dir))
    d = json.loads(out)
    assert d["match"] and d["reports"][0]["equality_pairs"] == [[2, 6], [2, 7], [3, 4]]


def test_reproduce_table3_csv(capsys, cache_dir):
    code, out, _ = run(capsys, "reproduce", "table3", "--format", "csv", "--cache-dir", str(cache_dir))
    assert code == 0 and len(out.splitlines()) == 46


def test_verify_bo(capsys, cache_dir):
    code, out, _ = run(capsys, "verify", "bo", "--k", "10..20", "--sum-bound", "100",
                       "--cache-dir", str(cache_dir))
    assert code == 0 and json.loads(out)["all_equal"]


def test_verify_logconc(capsys, cache_dir):
    code, out, _ = run(capsys, "verify", "logconc", "--k", "30..40", "--n-max", "200",
                       "--cache-dir", str(cache_dir))
    assert code == 0
    code, out, _ = run(capsys, "verify", "logconc", "--k", "29", "--n-max", "200",
                       "--cache-dir", str(cache_dir))
    assert code == 1


def test_verify_bounds(capsys, cache_dir):
    code, out, _ = run(capsys, "verify", "bounds", "--k", "3", "--n-max", "300", "--a-max", "2000",
                       "--cache-dir", str(cache_dir))
    assert code == 0
    assert all(r["result"] == "pass" for r in json.loads(out)["reports"])


def test_verify_campaign_scaled(capsys, cache_dir):
    code, out, _ = run(capsys, "verify", "campaign", "--n0", "200", "--k-max", "30",
                       "--cache-dir", str(cache_dir))
    assert code == 0 and json.loads(out)["ok"]


def test_verify_campaign_abort_exits_1(capsys, cache_dir):
    code, out, err = run(capsys, "verify", "campaign", "--n0", "150", "--k-max", "40",
                         "--time-budget", "0", "--cache-dir", str(cache_dir))
    assert code == 1 and "resume" in err
    code, out, _ = run(capsys, "verify", "campaign", "--n0", "150", "--k-max", "40",
                       "--cache-dir", str(cache_dir))
    assert code == 0


def test_jobs_do_not_change_output(capsys, tmp_path, monkeypatch):
    monkeypatch.delenv("REGPART_CACHE", raising=False)
    outs = []
    for jobs in ("1", "8"):
        outs.append(run(capsys, "verify", "logconc", "--k", "30..45", "--n-max", "150", "--jobs", jobs,
                        "--cache-dir", str(tmp_path / jobs))[1])
    assert outs[0] == outs[1]


def test_warm_cache_same_output(capsys, cache_dir):
    argv = ("reproduce", "table1", "--format", "json", "--cache-dir", str(cache_dir))
    cold = run(capsys, *argv)[1]
    warm = run(capsys, *argv)[1]
    assert cold == warm
