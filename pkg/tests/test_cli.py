import io
import json
import subprocess
import sys

import pytest

from wittkit import cli


def call(*argv):
    out = io.StringIO()
    status = cli.run(list(argv), out)
    return status, out.getvalue()


def report(*argv):
    status, text = call(*argv)
    return status, json.loads(text)


def test_witt_table():
    status, r = report("witt-table", "Qp(3)")
    assert status == 0 and r["schema"] == "wittkit.report/v1"
    assert len(r["results"]["elements"]) == 16 and len(r["results"]["add"]) == 16


def test_classify_hyperbolic_plane():
    status, r = report("classify", "<1,-1> over Q")
    assert status == 0
    assert r["results"]["witt_class"] == "[]" and r["results"]["is_zero"]


def test_pushout_check():
    status, r = report("pushout-check", "Qp(5)")
    assert status == 0
    res = r["results"]
    assert (res["units"], res["square_classes"], res["quotient"]) == (8, 4, "Z/2")


@pytest.mark.parametrize("argv", [
    ["unit-decompose", "<1,1,1,2,2> over Qp(3)"],
    ["residue", "<1, T, 2> over Qp(3)(T)", "--at", "(T)"],
    ["residue", "<3, 6, 5> over Q", "--prime", "3"],
    ["milnor-check", "--base", "Qp(3)", "--support", "(T),(T-1)", "--samples", "20"],
    ["gersten", "--base", "Qp(3)", "--support", "(T),(T-1)", "--check", "all", "--max-support", "2"],
    ["gersten", "--base", "F(5)", "--scheme", "DVR", "--sheaf", "Wtor", "--check", "d2"],
    ["p1-fibrations", "R"],
    ["sphere-cohomology", "--base", "Qp(3)", "--p", "1", "--q", "1"],
    ["orientation", "--base", "R", "--n", "3"],
    ["bezout", "X^3-2X / X^2-1", "--field", "Q"],
    ["clutch", "--base", "Qp(3)", "--u", "2"],
    ["axioms", "--base", "Qp(3)", "--samples", "20"],
])
def test_commands_succeed(argv):
    status, r = report(*argv)
    assert status == 0, r
    assert r["command"] == argv[0] and r["property_failures"] == []


def test_text_output():
    status, text = call("orientation", "--base", "R", "--n", "2", "--output", "text")
    assert status == 0 and "orientable" in text and not text.lstrip().startswith("{")


def test_input_errors_exit_2():
    assert call("classify", "<1,-1> over Z")[0] == 2
    assert call("bezout", "X / X", "--field", "Q")[0] == 2
    assert call("no-such-command")[0] == 2
    assert call("orientation", "--base", "Q", "--n", "1")[0] == 2
    status, r = report("residue", "<1> over Qp(3)(T)", "--at", "T^2-1")
    assert status == 2 and r["error"]["type"] == "ParseError"


def test_property_failure_exit_1(monkeypatch):
    monkeypatch.setitem(cli.COMMANDS, "pushout-check", lambda args: ({"ok": False}, [{"counterexample": "x"}]))
    status, r = report("pushout-check", "Qp(3)")
    assert status == 1 and r["property_failures"] == [{"counterexample": "x"}]


def test_deterministic_output():
    argv = ["milnor-check", "--base", "Qp(3)", "--samples", "15", "--no-timing", "--seed", "4"]
    a, b = call(*argv)[1], call(*argv)[1]
    assert a == b and "timing" not in json.loads(a)


def test_seed_precedence(monkeypatch):
    monkeypatch.setenv("WITTKIT_SEED", "17")
    assert report("orientation", "--base", "R", "--n", "1")[1]["inputs"]["seed"] == 17
    assert report("orientation", "--base", "R", "--n", "1", "--seed", "3")[1]["inputs"]["seed"] == 3
    monkeypatch.setenv("WITTKIT_SEED", "abc")
    assert call("orientation", "--base", "R", "--n", "1")[0] == 2
    monkeypatch.delenv("WITTKIT_SEED")
    assert report("orientation", "--base", "R", "--n", "1")[1]["inputs"]["seed"] == 0


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wittkit.cli", "pushout-check", "F(5)", "--no-timing"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["results"]["witt_ring"] == 4


def test_reports_match_published_schema():
    jsonschema = pytest.importorskip("jsonschema")
    from pathlib import Path
    schema = json.loads((Path(__file__).parent.parent / "docs" / "report.schema.json").read_text())
    for argv in (["witt-table", "F(5)"], ["classify", "<1> over Z"], ["orientation", "--base", "R", "--n", "2"],
                 ["clutch", "--base", "Qp(3)", "--u", "2", "--no-timing"]):
        jsonschema.validate(report(*argv)[1], schema)
