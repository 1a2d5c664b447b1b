import json
import shutil
import subprocess

import pytest

from threegroups.cli import CliResult, main, run
from threegroups.qe import CASES


def test_decide_labels():
    assert run(["decide", "QisL"]) == (0, "Q=L: true\nQ≠L: false")


def test_witness_example():
    assert run(["witness", "2*frac(x) > 1 & floor(x) >= 3 & floor(x) ~ 1 mod 2"]) == (0, "15/4")


def test_eval_lex():
    assert run(["eval", "--model", "lex", "--assign", "x=(1,0)", "L(x)"]) == (0, "false")
    assert run(["eval", "--model", "std", "--assign", "x=1/2", "exists y. (Z(y) & y < x)"]) == (0, "true")


def test_qe_prints_special_formula():
    assert run(["qe", "exists x. x + x = y"]) == (0, "true")
    assert run(["qe", "forall x. L(x)"]) == (0, "QisL")


def test_parse_special():
    code, out = run(["parse", "--special", "x = 1"])
    assert code == 0 and out == "floor(x) >= 1 & -floor(x) >= -1 & -frac(x) >= 0"


def test_unsat_exit_codes():
    assert run(["witness", "x > 0 & x < 0"]) == (0, "UNSAT")
    assert run(["witness", "--fail-on-unsat", "x > 0 & x < 0"])[0] == 1
    assert run(["--fail-on-unsat", "witness", "x > 0 & x < 0"])[0] == 1


@pytest.mark.parametrize("argv, fragment", [
    (["qe", "exists x. (x +"], "parse error at 1:15"),
    (["decide", "x = 1"], "not a sentence"),
    (["eval", "--assign", "x=1", "x > y"], "unbound variable y"),
    (["witness", "x > y"], "expected one variable"),
    (["frobnicate"], "usage"),
    (["check-axioms", "--samples", "0"], "n_samples"),
])
def test_errors(argv, fragment):
    code, out = run(argv)
    assert code == 2
    assert out.startswith("error") and fragment in out


def test_json_documents():
    code, out = run(["--format", "json", "decide", "exists x. (L(x) & not Z(x))"])
    doc = json.loads(out)
    assert code == 0
    assert doc["status"] == "ok" and doc["payload"] == {"Q=L": True, "Q≠L": True}
    assert doc["timing_ms"] is None
    doc = json.loads(run(["witness", "x > 0 & x < 0", "--format", "json"])[1])
    assert doc["status"] == "unsat"
    doc = json.loads(run(["--format", "json", "qe", "exists x. (x +"])[1])
    assert doc["status"] == "error"


def test_timing_is_opt_in():
    code, out = run(["--timing", "qe", "exists x. x > y"])
    assert code == 0 and out.splitlines()[-1].startswith("time: ")
    assert json.loads(run(["--format", "json", "--timing", "qe", "x > 0"])[1])["timing_ms"] >= 0


def test_check_axioms():
    code, out = run(["check-axioms", "--model", "lex", "--samples", "300", "--seed", "2"])
    assert code == 0
    assert "Q=L: false (witness (1,0) not in L)" in out
    doc = json.loads(run(["check-axioms", "--samples", "50", "--format", "json"])[1])
    assert doc["payload"]["passed"] is True


def test_fuzz_is_deterministic_and_reports_cases():
    argv = ["fuzz", "--cases", "60", "--seed", "4"]
    first, second = run(argv), run(argv)
    assert first == second and first[0] == 0
    assert all(c in first[1] for c in CASES)
    doc = json.loads(run(argv + ["--format", "json"])[1])
    assert doc["payload"]["mismatches"] == [] and sum(doc["payload"]["per_kind"].values()) == 60


def test_fuzz_failure_exits_nonzero(monkeypatch):
    import threegroups.fuzz as fz

    monkeypatch.setitem(fz._CHECKS, "qf", lambda rng: ["planted mismatch"])
    code, out = run(["fuzz", "--cases", "5"])
    assert code == 2 and "planted mismatch" in out


def test_result_exit_codes():
    assert CliResult("x", "ok", "").exit_code() == 0
    assert CliResult("x", "unsat", "").exit_code() == 0
    assert CliResult("x", "unsat", "").exit_code(True) == 1
    assert CliResult("x", "error", "").exit_code() == 2


def test_main_streams(capsys):
    assert main(["decide", "QisL"]) == 0
    assert capsys.readouterr().out == "Q=L: true\nQ≠L: false\n"
    assert main(["decide", "x > 0"]) == 2
    assert "not a sentence" in capsys.readouterr().err


@pytest.mark.skipif(shutil.which("tg") is None, reason="console script not installed")
def test_console_script():
    out = subprocess.run(["tg", "decide", "forall x. (frac(x) >= 0)"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout == "Q=L: true\nQ≠L: true\n"
