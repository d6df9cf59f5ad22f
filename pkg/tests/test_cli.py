import csv
import io
import json

import pytest

from symlab.cli import run
from symlab.schemas import validate_report


def invoke(*argv):
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    return code, buf.getvalue()


def invoke_json(*argv):
    code, text = invoke(*argv)
    report = json.loads(text)
    validate_report(report)
    return code, report


@pytest.mark.parametrize("argv, code", [
    (("symmetries", "--candidate", "G1"), 0),
    (("symmetries", "--candidate", "Gq"), 1),
    (("symmetries",), 1),
    (("table",), 0),
    (("adjoint",), 0),
    (("adjoint", "--generator", "G3", "--eps", "0.5"), 0),
    (("optimal", "--vector", "3,-2,5"), 0),
    (("optimal", "--count", "50"), 0),
    (("transform", "--action", "Xi1", "--eps", "0.3", "--lambda", "2"), 0),
    (("transform", "--action", "Xi4", "--eps", "1", "--lambda", "0.5", "--k", "2"), 0),
    (("transform", "--action", "Xi3", "--eps", "1", "--lambda", "2"), 1),
    (("reduce", "--group", "Xi2"), 0),
    (("reduce", "--group", "Xi6"), 1),
    (("series", "--ode", "first", "--lambda", "1"), 0),
    (("series", "--ode", "second", "--lambda", "1", "--c0", "1/2", "--c1", "0"), 0),
    (("series", "--ode", "traveling", "--lambda", "1", "--k", "2"), 0),
    (("conslaw", "--generator", "G2", "--check", "divergence"), 0),
    (("conslaw", "--generator", "G3", "--check", "divergence"), 1),
    (("conslaw", "--generator", "junk", "--check", "divergence"), 1),
    (("conslaw", "--probe", "quasi"), 1),
    (("conslaw", "--generator", "G1", "--check", "numeric", "--lambda", "1"), 0),
    (("errata",), 0),
])
def test_reports_validate_and_exit_codes(argv, code):
    got, report = invoke_json(*argv)
    assert got == code
    assert report["command"] == argv[0]
    assert report["status"] == ("ok" if code == 0 else "check-failed")
    assert report["argv"] == list(argv)


def test_symmetry_verdicts():
    _, rep = invoke_json("symmetries")
    verdicts = {r["field"]: r["is_symmetry"] for r in rep["result"]["reports"]}
    # an arbitrary q only works when it solves the linearised equation
    assert verdicts == {"G1": True, "G2": True, "G3": False, "Gq": False}


def test_table_values():
    _, rep = invoke_json("table")
    tab = rep["result"]["table"]
    assert tab["[G1,G3]"] == "G1" and tab["[G2,G3]"] == "2*G2"
    assert rep["result"]["jacobi"] is True


def test_optimal_vector_result():
    _, rep = invoke_json("optimal", "--vector", "3,-2,5")
    red = rep["result"]["reduction"]
    assert red["representative"] == "G3" and red["scale"] == "1/5"
    assert [w["generator"] for w in red["word"]] == ["G1", "G2"]
    assert "count" not in rep["params"]


def test_params_echo_lambda_name():
    _, rep = invoke_json("series", "--ode", "first", "--lambda", "1")
    assert rep["params"]["lambda"] == "1"
    assert "lam" not in rep["params"]


def test_negative_grid_bounds_accepted():
    code, rep = invoke_json("transform", "--action", "Xi2", "--eps", "1", "--lambda", "2",
                            "--grid", "-2:2:41")
    assert code == 0
    assert rep["result"]["max_residual"] < 1e-10


@pytest.mark.parametrize("argv", [
    ("series", "--ode", "first"),
    ("series", "--ode", "first", "--lambda", "-1"),
    ("table", "--emit", "csv"),
    ("transform", "--action", "Xi9", "--eps", "1", "--lambda", "1"),
    ("symmetries", "--candidate", "G7"),
    ("nosuchcommand",),
    (),
])
def test_usage_errors_exit_two(argv, capsys):
    code, text = invoke(*argv)
    assert code == 2
    assert text == ""


def test_domain_error_envelope():
    code, rep = invoke_json("series", "--ode", "traveling", "--lambda", "1", "--k", "0")
    assert code == 1
    assert rep["status"] == "error"
    assert rep["error"]["type"] == "DomainError"


def test_optimal_csv():
    code, text = invoke("optimal", "--vector", "1,0,0", "--emit", "csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0
    assert rows[0] == ["l1", "l2", "l3", "representative", "replay_error"]
    assert rows[1][3] == "G1"


def test_series_csv_sections():
    code, text = invoke("series", "--ode", "first", "--lambda", "1", "--emit", "csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["n", "c_n"] and rows[2] == ["1", "3/8"]
    header = rows.index(["eta", "series", "rk4", "abs_err"])
    assert rows[header - 1] == []
    assert all(float(r[3]) < 1e-8 for r in rows[header + 1:])


def test_transform_csv():
    code, text = invoke("transform", "--action", "Xi1", "--eps", "0.3", "--lambda", "2",
                        "--grid", "-1:1:5", "--emit", "csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["x", "t", "u", "residual"]
    assert len(rows) == 26


def test_output_is_deterministic(monkeypatch):
    monkeypatch.setenv("SYMLAB_SEED", "7")
    first = invoke("optimal", "--count", "40")
    second = invoke("optimal", "--count", "40")
    assert first == second
