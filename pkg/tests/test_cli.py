import json
import subprocess
import sys

import pytest
from hypothesis import given

from skelbody.acceptance import golden_cases, run_cli_case
from skelbody.cli import run
from skelbody.syntax import parse, to_text
from tests.strategies import body_terms

CASES = golden_cases()


def call(*argv, stdin=""):
    return run_cli_case({"args": list(argv), "stdin": stdin})


@pytest.mark.parametrize("case", CASES, ids=[" ".join(c["args"])[:40] for c in CASES])
def test_golden(case):
    assert run_cli_case(case) == (case["exit"], case["stdout"], case["stderr"])


class TestExitCodes:
    def test_ok(self):
        assert call("reduce", "(* x0 (ap [(* %0 %1)] x1))") == (0, "(* x0 x1)\n", "")

    def test_parse_error(self):
        code, out, err = call("reduce", "(* x0")
        assert code == 1 and out == "" and err.strip().endswith("unexpected end of input")

    def test_usage_error_is_not_divergence(self):
        code, _, err = call("reduce")
        assert code == 1 and err

    def test_divergent(self):
        code, out, err = call("reduce", "(* (ap [(* %0 %0)]) (ap [(* %0 %0)]))")
        assert code == 2 and out.startswith("divergent (cycle") and err == ""

    def test_fuel_flag(self):
        t = "(* x0 " + "(ap [(* %0 %0)]) " * 8 + ")"
        assert call("reduce", "--fuel", "50", t)[0] == 2
        assert call("reduce", t)[0] == 0

    def test_domain_error(self):
        code, _, err = call("wct", "(+ x0 x1)", "--vars", "x0,x1")
        assert code == 3 and err


class TestInput:
    def test_file_argument(self, tmp_path):
        f = tmp_path / "t.txt"
        f.write_text("(* x0 (ap [%0]))\n")
        assert call("reduce", f"@{f}") == (0, "x0\n", "")

    def test_stdin(self):
        assert call("linearize", "-", stdin="(+ x0 (scal 3 x1))") == (0, "1 x0\n3 x1\n", "")

    def test_json(self):
        docs = [json.loads(call(*argv)[1]) for argv in (
            ("reduce", "--json", "(* x0 1)"),
            ("linearize", "--json", "(+ x0 x0)"),
            ("eq", "--json", "(* x0 1)", "x0"),
        )]
        assert all(d["schema"] == 1 for d in docs)
        assert docs[0]["term"] == "x0"
        assert docs[1]["monomials"] == [[2, "x0"]]
        assert docs[2]["verdict"] is True


@given(body_terms())
def test_linearize_output_parses_back(t):
    code, out, _ = call("linearize", to_text(t))
    if code != 0:
        assert code == 2
        return
    for line in out.splitlines():
        if line != "0":
            coeff, mono = line.split(" ", 1)
            int(coeff)
            assert to_text(parse(mono)) == mono


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "skelbody.cli", "reduce", "(* x1 1)"],
                          capture_output=True, text=True)
    assert (proc.returncode, proc.stdout) == (0, "x1\n")


def test_run_defaults_to_process_streams(capsys):
    assert run(["canon", "x0"]) == 0
    assert capsys.readouterr().out == "x0\n"


def test_golden_inputs_are_stable_under_printing():
    from skelbody.errors import SkelError
    checked = 0
    for case in CASES:
        for arg in case["args"]:
            try:
                t = parse(arg)
            except SkelError:
                continue
            assert parse(to_text(t)) == t
            checked += 1
    assert checked >= 20
