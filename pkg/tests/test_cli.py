import csv
import io
import json
import subprocess
import sys

import pytest

from wittcohom.algebra import semidirect_a, semidirect_b, tensor_density
from wittcohom.cli import RunConfig, cmd_solve, cmd_tables, cmd_verify, expected_dims, main, read_config
from wittcohom.scalars import INFINITY, LambdaParam


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_tables_single_rows(capsys):
    code, out, _ = run(["tables", "--algebra", "wa", "--lambda", "1", "--format", "json"], capsys)
    assert code == 0
    assert [(r["h2"], r["hl2"], r["h1"]) for r in json.loads(out)] == [(2, 3, 2)]
    code, out, _ = run(["tables", "--algebra", "wb", "--lambda", "inf", "--format", "json"], capsys)
    assert [(r["h2"], r["hl2"], r["h1"]) for r in json.loads(out)] == [(3, 3, 2)]
    code, out, _ = run(["tables", "--algebra", "wab", "--a", "0", "--b", "2", "--format", "csv"], capsys)
    row = next(csv.DictReader(io.StringIO(out)))
    assert (row["h2"], row["hl2"], row["h1"]) == ("1", "2", "2")


def test_tables_markdown(capsys):
    code, out, _ = run(["tables", "--algebra", "wab", "--a", "1/2", "--b", "0"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "| algebra | params | h2 | hl2 | h1 | expected | match |"
    assert "| W(a,b) | a=1/2,b=0 | 2 | 2 | 1 | (2, 2, 1) | yes |" in out


def test_tables_mismatch_exit_code(capsys):
    code, out, _ = run(["tables", "--algebra", "wa", "--lambda", "1", "--format", "json", "--inject-bad-weight"], capsys)
    assert code == 1
    assert json.loads(out)[0]["match"] is False


@pytest.mark.parametrize(
    "spec, dims",
    [
        (semidirect_a(0), (3, 4, 2)),
        (semidirect_a(INFINITY), (2, 3, 2)),
        (semidirect_b(0), (3, 3, 3)),
        (semidirect_b(-1), (3, 3, 2)),
        (tensor_density(0, 1), (3, 4, 2)),
        (tensor_density(2, 1), (3, 4, 2)),
        (tensor_density("1/2", 1), (2, 2, 1)),
        (tensor_density("-1/2", 0), (2, 2, 1)),
        (tensor_density("1/3", 0), (1, 1, 1)),
    ],
    ids=str,
)
def test_expected_lookup_normalizes(spec, dims):
    assert expected_dims(spec) == dims


@pytest.mark.parametrize(
    "argv",
    [
        ["tables", "--window", "3"],
        ["tables", "--algebra", "witt"],
        ["solve", "h2", "--algebra", "wa"],
        ["solve", "h2", "--algebra", "wab", "--a", "0"],
        ["solve", "nonsense", "--algebra", "wa", "--lambda", "1"],
        ["verify", "--suite", "nope"],
        ["verify", "--lambda", "1/0"],
        ["tables", "--format", "xml"],
        [],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_solve_h2_wb0(capsys):
    code, out, _ = run(["solve", "h2", "--algebra", "wb", "--lambda", "0"], capsys)
    assert code == 0
    assert json.loads(out)["dims"] == {"vir": 1, "ab": 1, "mix": 1, "total": 3}


def test_solve_inv_wb7():
    code, text = cmd_solve(RunConfig(algebra="wb", lam=LambdaParam.finite(7)), "inv")
    assert code == 0 and json.loads(text)["dim"] == 0


def test_solve_mixing_wa0():
    code, text = cmd_solve(RunConfig(algebra="wa", lam=LambdaParam.finite(0), window=6), "mixing")
    doc = json.loads(text)
    assert doc["dim"] == 2 and doc["named"] == ["BetaLambda", "Iota"]


@pytest.mark.parametrize("kind", ["h2", "hl2", "inv", "h1", "abelian", "mixing"])
def test_solve_json_round_trips(kind):
    _, text = cmd_solve(RunConfig(algebra="wb", lam=LambdaParam.finite(0), window=5), kind)
    assert json.dumps(json.loads(text), indent=2) == text


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("algebra = wa\nlambda = 5/7\nformat = json\n", encoding="utf-8")
    code, out, _ = run(["tables", "--config", str(cfg)], capsys)
    assert code == 0 and json.loads(out)[0]["params"] == "lambda=5/7"
    code, out, _ = run(["tables", "--config", str(cfg), "--lambda", "0"], capsys)
    assert json.loads(out)[0]["params"] == "lambda=0"
    cfg.write_text("colour = red\n", encoding="utf-8")
    assert run(["tables", "--config", str(cfg)], capsys)[0] == 2
    assert run(["tables", "--config", str(tmp_path / "missing.cfg")], capsys)[0] == 2


def test_read_config_keys():
    assert read_config("window = 6\nseed=3\n") == {"window": "6", "seed": "3"}


def test_verify_injected_bad_weight_reports_triple():
    cfg = RunConfig(algebra="wa", lam=LambdaParam.finite(1), window=4, suite="jacobi", inject_bad_weight=True)
    code, text = cmd_verify(cfg)
    report = json.loads(text)
    assert code == 1
    failure = report["suites"]["jacobi"]["failures"][0]
    assert failure["check"] == "jacobi" and len(failure["detail"]) == 3


def test_verify_small_window_is_unstable():
    cfg = RunConfig(algebra="wb", window=2, suite="cocycles,leibniz,derivations")
    code, text = cmd_verify(cfg)
    report = json.loads(text)
    assert code == 0 and report["ok"]
    assert {s["status"] for s in report["suites"].values()} == {"unstable"}
    assert report["warnings"]


def test_verify_is_deterministic():
    cfg = RunConfig(algebra="wa", window=5, suite="automorphisms,extensions", seed=7)
    first, second = cmd_verify(cfg), cmd_verify(cfg)
    assert first == second
    other = cmd_verify(RunConfig(algebra="wa", window=5, suite="automorphisms,extensions", seed=8))
    assert other[0] == 0


def test_verify_parallel_matches_sequential():
    cfg = RunConfig(algebra="wb", window=5, suite="jacobi,equivariance")
    assert cmd_verify(cfg) == cmd_verify(RunConfig(algebra="wb", window=5, suite="jacobi,equivariance", jobs=2))


def test_module_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "wittcohom", "solve", "inv", "--algebra", "wa", "--lambda", "2", "--window", "5"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(result.stdout)["dim"] == 1
    assert result.stderr == ""


def test_cmd_tables_default_grid_matches():
    code, _ = cmd_tables(RunConfig(window=5, fmt="json"))
    assert code == 0
