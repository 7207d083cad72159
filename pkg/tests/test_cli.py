import json
import subprocess
import sys
from types import SimpleNamespace

import numpy as np
import pytest

from monogamy import __version__
from monogamy.cli import SUITES, _finish, main, run_translate, run_verify
from monogamy.game.strategy import strategy_from_json
from monogamy.report import Check, RunReport, dumps
from monogamy.seeding import MAX_SEED, check_seed, substream, thread_count


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- seeding ---------------------------------------------------------------------


def test_check_seed_bounds():
    assert check_seed(0) == 0 and check_seed(MAX_SEED) == MAX_SEED
    for bad in (-1, MAX_SEED + 1):
        with pytest.raises(ValueError):
            check_seed(bad)


def test_substreams():
    a = substream(7, 0).random(4)
    assert np.array_equal(a, substream(7, 0).random(4))
    assert not np.array_equal(a, substream(7, 1).random(4))
    assert not np.array_equal(a, substream(8, 0).random(4))
    assert not np.array_equal(substream(7, 0, 1).random(4), substream(7, 1, 0).random(4))


def test_thread_count(monkeypatch):
    monkeypatch.setenv("MONOGAMY_THREADS", "4")
    assert thread_count() == 4
    monkeypatch.setenv("MONOGAMY_THREADS", "junk")
    assert thread_count() == 1


# -- report ---------------------------------------------------------------------


def test_report_schema_and_nonfinite():
    rep = RunReport("verify", {"n": 2}, seed=3)
    rep.bound_check("x", 0.5, 1.0, 1e-9)
    rep.add("y", float("inf"), 0.0, True)
    doc = json.loads(rep.to_json())
    assert doc["schema"] == 1 and doc["tool"] == "monogamy" and doc["version"] == __version__
    assert doc["checks"][0]["value"] == -0.5 and doc["checks"][1]["value"] == "inf"
    assert doc["passed"] is True
    rep.bound_check("z", 1.1, 1.0, 1e-9)
    assert not rep.passed


def test_dumps_sorted_and_round_trip():
    text = dumps({"b": 0.1 + 0.2, "a": 1})
    assert text.index('"a"') < text.index('"b"') and text.endswith("\n")
    assert json.loads(text)["b"] == 0.1 + 0.2
    with pytest.raises(ValueError):
        dumps({"x": float("nan")})


def test_check_detail_optional():
    assert "detail" not in Check("a", 0.0, 0.0, True).as_dict()
    assert Check("a", 0.0, 0.0, True, detail="why").as_dict()["detail"] == "why"


# -- exit codes ----------------------------------------------------------------------


def test_verify_exit_zero(capsys):
    code, out, err = run(capsys, "verify", "lemma1", "--trials", "3", "--seed", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] and doc["seed"] == 1 and "wall_ms" not in doc["results"]
    assert err.startswith("verify: pass")


def test_failing_report_exits_one(capsys):
    rep = RunReport("verify", {})
    rep.add("bad", 1.0, 0.0, False)
    assert _finish(rep, SimpleNamespace(out=None, timing=False), 0.0) == 1
    assert "FAIL" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["bounds", "--n-max", "3"],
        ["bounds", "--n-max", "66"],
        ["verify", "lemma3", "--n", "6"],
        ["verify", "lemma1", "--n", "3"],
        ["optimize", "--game", "basis", "--n", "6"],
        ["translate", "--basis", "11,11", "--theta", "10", "--x", "11"],
        ["translate", "--basis", "1x,01", "--theta", "10", "--x", "11"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_argparse_errors_exit_two(capsys):
    for argv in (["verify", "nosuch"], ["verify", "lemma1", "--seed", "-1"], []):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
    capsys.readouterr()


# -- outputs -----------------------------------------------------------------------


def test_json_byte_identical(capsys):
    _, a, _ = run(capsys, "verify", "claim8", "--trials", "10", "--seed", "42")
    _, b, _ = run(capsys, "verify", "claim8", "--trials", "10", "--seed", "42")
    _, c, _ = run(capsys, "verify", "claim8", "--trials", "10", "--seed", "43")
    assert a == b and a != c


def test_optimize_byte_identical_and_strategy_out(tmp_path, capsys):
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        code, _, _ = run(
            capsys, "optimize", "--game", "basis", "--n", "2", "--iters", "15", "--restarts", "2",
            "--seed", "9", "--out", str(path), "--strategy-out", str(tmp_path / "s.json"),
        )
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    doc = json.loads(outs[0])
    assert 0.5 <= doc["results"]["lower_bound"] <= doc["results"]["binomial_bound"] + 1e-9
    s = strategy_from_json((tmp_path / "s.json").read_text())
    s.validate()
    assert s.digest() == doc["results"]["strategy_digest"]


def test_timing_flag(capsys):
    _, out, _ = run(capsys, "verify", "lemma6", "--n", "8", "--timing")
    assert json.loads(out)["results"]["wall_ms"] >= 0


def test_bounds_csv_lf(tmp_path, capsys):
    path = tmp_path / "b.csv"
    assert main(["bounds", "--n-max", "8", "--out", str(path)]) == 0
    raw = path.read_bytes()
    assert b"\r" not in raw and raw.count(b"\n") == 5
    code, out, _ = run(capsys, "bounds", "--n-max", "4", "--format", "json")
    assert code == 0 and len(json.loads(out)["rows"]) == 2


def test_translate(capsys):
    code, out, _ = run(capsys, "translate", "--basis", "11,01", "--theta", "10", "--x", "11")
    res = json.loads(out)["results"]
    assert code == 0 and res["A"] == ["11"] and res["s"] == "01" and res["s_prime"] == "10"
    rep = run_translate("10,01", "11", "01")
    assert rep.results["A"] == ["10", "01"] and rep.results["s"] == "00" and rep.results["s_prime"] == "01"


@pytest.mark.parametrize("suite", SUITES)
def test_every_suite_small(suite):
    n = 8 if suite == "lemma6" else (4 if suite in ("lemma3", "lemma4") else 2)
    rep = run_verify(suite, n=n, trials=2, seed=0)
    assert rep.passed and rep.checks


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "monogamy", "translate", "--basis", "10,01", "--theta", "01", "--x", "10"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["passed"]
