import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from apsq import cli, verify
from apsq.errors import InvariantViolation


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call("--stable", *argv)
    assert code == 0, err
    return json.loads(out)


def test_count():
    doc = call_json("count", "--n", "4", "--k", "2", "--p", "5", "--m", "2")
    assert doc["command"] == "count"
    assert doc["inputs"] == {"k": 2, "m": 2, "method": "fiber", "n": 4, "p": 5}
    assert doc["result"]["count"] == 56 and doc["result"]["q"] == 25
    assert "elapsed_ms" not in doc


@pytest.mark.parametrize("method", ["fiber", "reference", "brute"])
def test_count_methods_agree(method):
    doc = call_json("count", "--n", "3", "--p", "7", "--method", method)
    assert doc["result"]["count"] == 8


def test_elapsed_present_without_stable():
    code, out, _ = call("genus", "--n", "5")
    doc = json.loads(out)
    assert code == 0 and isinstance(doc["elapsed_ms"], int)
    assert doc["result"] == {"genus": 17, "n": 5}


def test_stable_is_byte_identical():
    argv = ("--stable", "classify", "--a", "49", "--r", "120", "--D", "409")
    assert call(*argv)[1] == call(*argv)[1]


def test_threads_do_not_change_output():
    base = call("--stable", "count", "--n", "5", "--p", "13", "--m", "2")[1]
    assert call("--stable", "--threads", "4", "count", "--n", "5", "--p", "13", "--m", "2")[1] == base


def test_count_sweep_csv():
    code, out, _ = call("count-sweep", "--n", "3,4", "--p-max", "11")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "n,k,p,m,count,genus,hw_ok"
    rows = [l.split(",") for l in lines[1:]]
    assert rows and all(r[-1] == "true" for r in rows)
    assert {int(r[0]) for r in rows} == {3, 4}


def test_five_square_fields():
    doc = call_json("five-square-fields", "--bound", "5")
    assert "409" in doc["result"]["fields"]
    assert all(row["run_length"] >= 5 for row in doc["result"]["rows"])


def test_conic():
    doc = call_json("conic", "1", "1", "-3")
    assert doc["result"]["solvable"] is False and doc["result"]["witness"] is None
    doc = call_json("conic", "1", "-2", "1")
    assert doc["result"]["solvable"] is True
    a, b, c = 1, -2, 1
    x, y, z = doc["result"]["witness"]
    assert a * x * x + b * y * y + c * z * z == 0 and (x, y, z) != (0, 0, 0)


def test_search_run():
    doc = call_json("search-run", "--A", "100", "--R", "30", "--D", "1")
    assert doc["result"]["best"] == 3


def test_ec_osculation():
    doc = call_json("ec", "osculation", "[1:1:1:1]", "--curve", "C3")
    assert doc["result"]["plane"] == [-1, 3, -3, 1]


def test_ec_point_syntax_over_quadratic_field():
    # the base point is the identity; a point with a sqrt(D) coordinate must parse too
    assert call_json("ec", "order", "[1:1:1:1]", "--curve", "C3", "--D", "409")["result"] == {"order": 1}
    code, _, err = call("ec", "order", "[1:5:7:s]", "--curve", "C3", "--D", "2")
    assert code == 2 and "sqrt(2)" in json.loads(err)["message"]


def test_verify_paper_table():
    code, out, _ = call("verify-paper", "--criteria", "2,9")
    assert code == 0
    lines = out.strip().splitlines()
    assert all(l.startswith("[PASS]") for l in lines[:-1])
    assert lines[-1] == f"{len(lines) - 1}/{len(lines) - 1} checks passed"


def test_verify_paper_reports_failure(monkeypatch):
    monkeypatch.setitem(verify.CRITERIA, 2, lambda: [verify.Check(2, "forced", False, "x")])
    code, out, _ = call("verify-paper", "--criteria", "2")
    assert code == 3 and out.startswith("[FAIL]")


def test_exit_code_usage():
    assert call("no-such-command")[0] == 2
    assert call("count", "--n", "4")[0] == 2


def test_exit_code_invalid_argument():
    code, _, err = call("count", "--n", "4", "--p", "2")
    assert code == 2 and json.loads(err)["error"] == "invalid-argument"
    assert call("conic", "0", "1", "1")[0] == 2
    assert call("verify-paper", "--criteria", "11")[0] == 2
    assert call("--threads", "0", "genus", "--n", "3")[0] == 2


def test_exit_code_invariant(monkeypatch):
    def boom(args):
        raise InvariantViolation("forced")

    monkeypatch.setattr(cli, "cmd_genus", boom)
    code, _, err = call("genus", "--n", "3")
    assert code == 3 and json.loads(err)["error"] == "invariant-violation"


def test_exit_code_resource_limit():
    code, _, err = call("count", "--n", "8", "--p", "101", "--m", "2", "--method", "brute")
    assert code == 4 and json.loads(err)["error"] == "resource-limit"


def test_to_json_big_ints_and_fractions():
    doc = cli.to_json({"small": 2 ** 53 - 1, "big": 2 ** 53, "neg": -(2 ** 60), "f": Fraction(-3, 4), "s": {3, 1}})
    assert doc == {"small": 2 ** 53 - 1, "big": str(2 ** 53), "neg": str(-(2 ** 60)), "f": "-3/4", "s": [1, 3]}


def test_parse_coord():
    assert cli.parse_coord("7") == (Fraction(7), Fraction(0))
    assert cli.parse_coord("-3/4") == (Fraction(-3, 4), Fraction(0))
    assert cli.parse_coord("10+3s") == (Fraction(10), Fraction(3))


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "apsq.cli", "--stable", "genus", "--n", "4"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "genus"
