"""Command-line contract: output bytes, exit codes, budget handling."""

import json
import subprocess

import pytest

from confalg import suites
from confalg.cli import main
from confalg.dsl import parse
from confalg.suites import Identity

_REVERSED_WORD = "C[3]*C[2]*C[1]*C[0]*J[2,3]*J[1,3]*J[1,2]*J[0,3]*J[0,2]*J[0,1]*D"


# ---------------------------------------------------------------------------
# expression commands
# ---------------------------------------------------------------------------

def test_normalize_byte_contract(capsys):
    assert main(["normalize", "C[0]*D"]) == 0
    assert capsys.readouterr().out == "D*C[0] + C[0]\n"


def test_bracket_output(capsys):
    assert main(["bracket", "D", "P[0]"]) == 0
    assert capsys.readouterr().out == "P[0]\n"


def test_normalize_rejects_bad_expression(capsys):
    assert main(["normalize", "Q"]) == 2
    err = capsys.readouterr().err
    assert "UnknownSymbol" in err
    assert main(["normalize", "P[0] +"]) == 2
    assert "DslSyntaxError" in capsys.readouterr().err


def test_engine_error_exits_three(capsys):
    assert main(["normalize", _REVERSED_WORD, "--budget", "1000"]) == 3
    assert "RewriteBudgetExceeded" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# run command
# ---------------------------------------------------------------------------

def test_run_single_identity(capsys):
    assert main(["run", "--identity", "position-definition"]) == 0
    out = capsys.readouterr().out
    assert "ok   position-definition" in out
    assert "overall: pass" in out


def test_run_single_assignment(capsys):
    rc = main(
        ["run", "--identity", "position-definition", "--assignment", "mu=2"]
    )
    assert rc == 0
    assert "[1 assignment," in capsys.readouterr().out


def test_run_structure_suite_json(capsys):
    assert main(["run", "--suite", "structure", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["suite"] == "structure"
    assert payload["pass"] is True
    assert [r["id"] for r in payload["identities"]] == [
        "jacobi-sweep",
        "matrix-oracle",
        "table-antisymmetry",
        "vector-field-oracle",
    ]


def test_run_usage_errors(capsys):
    cases = [
        ["run", "--suite", "structure", "--identity", "jacobi-sweep"],
        ["run", "--assignment", "mu=1"],
        ["run", "--suite", "spectroscopy"],
        ["run", "--identity", "no-such-identity"],
        ["run", "--identity", "position-definition", "--assignment", "mu=9"],
        ["run", "--identity", "position-definition", "--assignment", "mu"],
        ["run", "--threads", "-1"],
    ]
    for argv in cases:
        assert main(argv) == 2, argv
        assert capsys.readouterr().err.startswith("confalg: "), argv


def test_run_reports_failure_with_exit_one(monkeypatch, capsys):
    bogus = Identity(
        id="bogus-check",
        tag="structure",
        describe="deliberately false",
        statement="D = M",
        free=(),
        summed=(),
        lhs_src="D",
        rhs_src="M",
        lhs_ast=parse("D"),
        rhs_ast=parse("M"),
    )
    monkeypatch.setattr(suites, "find_identity", lambda _ident_id: bogus)
    assert main(["run", "--identity", "bogus-check"]) == 1
    out = capsys.readouterr().out
    assert "FAIL bogus-check" in out
    assert "overall: FAIL" in out


# ---------------------------------------------------------------------------
# list command
# ---------------------------------------------------------------------------

def test_list_all_suites(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for tag in ("structure", "localisation", "conformal-factor", "canonical"):
        assert f"suite {tag}" in out
    assert "jacobi-sweep  [3375 assignments]" in out


def test_list_one_suite(capsys):
    assert main(["list", "--suite", "canonical"]) == 0
    out = capsys.readouterr().out
    assert "suite canonical" in out
    assert "suite structure" not in out
    assert main(["list", "--suite", "bogus"]) == 2


# ---------------------------------------------------------------------------
# budget configuration
# ---------------------------------------------------------------------------

def test_budget_flag_lower_bound(capsys):
    assert main(["normalize", "D", "--budget", "10"]) == 2
    assert "at least 1000" in capsys.readouterr().err


def test_budget_env_variable(monkeypatch, capsys):
    monkeypatch.setenv("CONFALG_REWRITE_BUDGET", "banana")
    assert main(["normalize", "D"]) == 2
    assert "must be an integer" in capsys.readouterr().err
    monkeypatch.setenv("CONFALG_REWRITE_BUDGET", "10")
    assert main(["normalize", "D"]) == 2
    capsys.readouterr()
    # an explicit flag wins over the environment
    assert main(["normalize", "D", "--budget", "2000"]) == 0
    assert capsys.readouterr().out == "D\n"


def test_budget_env_exhaustion(monkeypatch, capsys):
    monkeypatch.setenv("CONFALG_REWRITE_BUDGET", "1000")
    assert main(["normalize", _REVERSED_WORD]) == 3
    assert "RewriteBudgetExceeded" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# installed entry point and cross-thread determinism
# ---------------------------------------------------------------------------

def _run_cli(*argv):
    return subprocess.run(
        ("confalg",) + argv, capture_output=True, text=True, timeout=600
    )


def test_console_script_runs():
    r = _run_cli("normalize", "C[0]*D")
    assert r.returncode == 0
    assert r.stdout == "D*C[0] + C[0]\n"


def test_json_bytes_identical_across_thread_counts():
    # the JSON report must not depend on how the work was scheduled
    a = _run_cli("run", "--suite", "structure", "--format", "json", "--threads", "1")
    b = _run_cli("run", "--suite", "structure", "--format", "json", "--threads", "3")
    assert a.returncode == 0 and b.returncode == 0
    assert a.stdout == b.stdout
