import argparse
import json
import subprocess
import sys

import pytest

from adeflop import cli


def run(tmp_path, *argv, out="r"):
    return cli.main([*argv, "--out", str(tmp_path / out), "--quiet"])


def read_tree(root):
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def test_parse_n_forms():
    assert cli.parse_n("8") == [8]
    assert cli.parse_n("1..4") == [1, 2, 3, 4]
    assert cli.parse_n("4,6,8") == [4, 6, 8]
    assert cli.parse_n("6,1..2,2") == [1, 2, 6]


@pytest.mark.parametrize("text", ["", "a", "3..1", "1-4", "1..", "-2"])
def test_parse_n_rejects(text):
    with pytest.raises(argparse.ArgumentTypeError):
        cli.parse_n(text)


def test_cell_stems():
    assert cli.Cell("verify", "relations", "A", 3).stem == "verify_relations_A3"
    assert cli.Cell("verify", "wz", options=(("part", "identity_eq21"), ("nmax", 5))).stem == "verify_wz_identity_eq21"


def test_relations_pass_and_write_reports(tmp_path):
    assert run(tmp_path, "verify", "relations", "--type", "A", "--n", "1..3") == cli.EXIT_OK
    out = tmp_path / "r"
    summary = json.loads((out / "summary.json").read_text())
    assert summary["status"] == "pass"
    assert [r["report"] for r in summary["reports"]] == [f"verify_relations_A{n}.json" for n in (1, 2, 3)]
    rep = json.loads((out / "verify_relations_A2.json").read_text())
    assert rep["status"] == "pass" and rep["params"]["n"] == 2
    assert "timing_seconds" not in rep


def test_type_a_walk_exits_one(tmp_path):
    assert run(tmp_path, "flop", "walk", "--type", "A", "--n", "3") == cli.EXIT_FAIL
    summary = json.loads((tmp_path / "r" / "summary.json").read_text())
    assert summary["reports"][0]["failures"] == ["fiber:fiber_Sigma0_count"]


def test_walk_log_and_dot(tmp_path):
    dot = tmp_path / "dot"
    code = run(tmp_path, "flop", "walk", "--type", "D", "--n", "4", "--emit-dot", str(dot))
    assert code == cli.EXIT_OK
    lines = (tmp_path / "r" / "walk_D4.jsonl").read_text().splitlines()
    assert len(lines) == 12
    assert all(isinstance(json.loads(line), dict) for line in lines)
    assert sorted(p.name for p in dot.iterdir()) == ["final_D4.dot", "initial_D4.dot"]
    assert (dot / "initial_D4.dot").read_text().startswith("graph ")


def test_dot_skipped_without_flag(tmp_path):
    run(tmp_path, "flop", "initial", "--type", "A", "--n", "2")
    assert not list((tmp_path / "r").glob("*.dot"))


@pytest.mark.parametrize("argv", [
    ["verify", "relations", "--type", "B", "--n", "3"],
    ["verify", "relations", "--type", "D", "--n", "3"],
    ["verify", "relations", "--type", "A", "--n", "x"],
    ["flop", "walk", "--type", "E", "--n", "9"],
    ["verify", "nosuch"],
    ["verify", "relations", "--n", "3"],
    ["verify", "invariance", "--type", "E", "--n", "6"],
    ["verify", "poisson", "--nmax", "2"],
    ["verify", "poisson", "--order", "3"],
    ["verify", "wz", "--nmax", "0"],
    ["verify", "slodowy", "--budget", "0"],
])
def test_usage_errors_exit_four(tmp_path, argv):
    try:
        code = run(tmp_path, *argv)
    except SystemExit as exc:
        code = exc.code
    assert code == cli.EXIT_USAGE
    assert not (tmp_path / "r").exists()


def test_unwritable_output_exits_three(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert cli.main(["verify", "relations", "--type", "A", "--n", "1", "--out", str(blocker), "--quiet"]) == cli.EXIT_IO


def test_budget_only_failure_exits_two(tmp_path):
    assert run(tmp_path, "verify", "slodowy", "--budget", "1") == cli.EXIT_BUDGET
    rep = json.loads((tmp_path / "r" / "verify_slodowy_sl4.json").read_text())
    assert rep["status"] == "budget-exceeded"


def test_budget_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.BUDGET_ENV, "1")
    assert run(tmp_path, "verify", "slodowy") == cli.EXIT_BUDGET
    assert run(tmp_path, "verify", "slodowy", "--budget", "100000", out="s") == cli.EXIT_OK


@pytest.mark.parametrize("raw", ["abc", "0", "-5"])
def test_bad_budget_environment(tmp_path, monkeypatch, raw):
    monkeypatch.setenv(cli.BUDGET_ENV, raw)
    assert run(tmp_path, "verify", "slodowy") == cli.EXIT_USAGE


def test_overall_status():
    from adeflop.report import VerificationReport
    ok, bad, budget = VerificationReport("a"), VerificationReport("b"), VerificationReport("c")
    bad.add("x", False)
    budget.add_budget("gb", "ran out")
    assert cli.overall_status([ok]) == "pass"
    assert cli.overall_status([ok, budget]) == "budget-exceeded"
    assert cli.overall_status([budget, bad]) == "fail"


def test_runs_are_byte_identical(tmp_path):
    argv = ["verify", "wz", "--nmax", "12", "--cert-nmax", "6"]
    run(tmp_path, *argv, out="a")
    run(tmp_path, *argv, "--jobs", "3", out="b")
    assert read_tree(tmp_path / "a") == read_tree(tmp_path / "b")


def test_flop_runs_are_byte_identical(tmp_path):
    argv = ["flop", "walk", "--type", "E", "--n", "6", "--emit-dot"]
    run(tmp_path, *argv, str(tmp_path / "da"), out="a")
    run(tmp_path, *argv, str(tmp_path / "db"), out="b")
    for x, y in (("a", "b"), ("da", "db")):
        assert read_tree(tmp_path / x) == read_tree(tmp_path / y)


def test_timing_flag(tmp_path):
    run(tmp_path, "verify", "recursion", "--n", "3", "--timing")
    rep = json.loads((tmp_path / "r" / "verify_recursion_A3.json").read_text())
    assert rep["timing_seconds"] >= 0


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "adeflop", "flop", "sequence", "--type", "A", "--n", "2",
                           "--out", str(tmp_path / "m")], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "pass: 1/1 reports pass" in proc.stdout
