import csv
import json
import subprocess
import sys

import jsonschema
import pytest

from carleman.cli import EXIT_CODES, REPORT_SCHEMA, finalize, main
from carleman.corpus import corpus_files


def write(tmp_path, doc, name="p.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def problem(a="1", b="0", c="0", d="0", shift="antipodal", g="t", m=16, n=128):
    return {"contour": {"type": "unit_circle"}, "shift": {"type": shift},
            "coefficients": {"a": a, "b": b, "c": c, "d": d}, "rhs": g,
            "discretization": {"modes": m, "collocation": n}}


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    report = json.loads(capsys.readouterr().out)
    jsonschema.validate(report, REPORT_SCHEMA)
    assert EXIT_CODES[report["verdict"]] == code
    return code, report


def walk_numbers(obj, path=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from walk_numbers(v, f"{path}/{k}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from walk_numbers(v, f"{path}/{i}")
    else:
        yield path, obj


def test_check_trivial(tmp_path, capsys):
    code, rep = run(capsys, "check", write(tmp_path, problem()))
    assert code == 0
    assert rep["verdict"] == "noetherian"
    assert rep["noether"]["min_abs"] == {"delta1": 1.0, "delta2": 1.0}


def test_index_negative(tmp_path, capsys):
    path = write(tmp_path, problem(a="(1 + t^(-1))/2", c="(1 - t^(-1))/2"))
    code, rep = run(capsys, "index", path)
    assert code == 0
    assert (rep["index"]["ind_M"], rep["index"]["ind_L"], rep["gamma"]) == (-1, -2, 1)
    assert rep["nullspace"]["l1"] == 0 and rep["nullspace"]["l1_star"] == 1


def test_check_violated(tmp_path, capsys):
    code, rep = run(capsys, "check", write(tmp_path, problem(a="t - 1")))
    assert code == 2
    assert rep["noether"]["violating_nodes"]["delta1"]["theta"] == 0.0
    assert rep["index"]["ind_M"] is None and rep["index"]["reason"]


def test_input_error(tmp_path, capsys):
    code, rep = run(capsys, "check", write(tmp_path, problem(a="t +")))
    assert code == 4
    assert rep["error"]["pointer"] == "/coefficients/a"
    assert rep["error"]["offset"] == 3


def test_missing_file(tmp_path, capsys):
    code, _ = run(capsys, "check", tmp_path / "absent.json")
    assert code == 4


def test_resolution_flag_triggers_inconclusive(tmp_path, capsys):
    path = write(tmp_path, problem(a="(1 + t^2)/2", c="(1 - t^2)/2"))
    code, rep = run(capsys, "index", path, "--resolution", "2,8")
    assert code == 3
    assert rep["diagnostics"]["collocation"] == 8
    assert rep["index"]["ind_M"] is None


def test_tol_flag(tmp_path, capsys):
    path = write(tmp_path, problem())
    _, rep = run(capsys, "check", path, "--tol", "tol_det=1e-4", "--tol", "gap_min=10")
    assert rep["diagnostics"]["tolerances"]["tol_det"] == 1e-4
    assert rep["diagnostics"]["tolerances"]["gap_min"] == 10
    code, _ = run(capsys, "check", path, "--tol", "nonsense=1")
    assert code == 4


def test_solve_and_csv(tmp_path, capsys):
    path = write(tmp_path, problem(a="(t - 1)/2", c="(t + 1)/2", shift="reflection", g="1"))
    out = tmp_path / "fields.csv"
    code, rep = run(capsys, "solve", path, "--csv", out)
    assert code == 0
    assert rep["solve"]["solvable"] is False
    assert len(rep["solve"]["conditions"]) == 1
    rows = list(csv.DictReader(open(out)))
    assert len(rows) == 128
    assert {"theta", "t_re", "t_im", "delta_abs", "delta_phase", "det_D_phase"} <= set(rows[0])


def test_verify_suite_and_determinism(tmp_path, capsys):
    path = str(corpus_files()[1])
    code, first = run(capsys, "verify", path, "--suite", "lemma3", "--seed", "4")
    assert code == 0 and first["verification"]["verdict"] == "passed"
    _, second = run(capsys, "verify", path, "--suite", "lemma3", "--seed", "4")
    assert first == second


def test_spectrum(tmp_path, capsys):
    code, rep = run(capsys, "spectrum", write(tmp_path, problem(m=4, n=32)))
    assert code == 0
    assert len(rep["spectrum"]["M"]) == 9
    assert len(rep["spectrum"]["L_system"]) == 18


def _parent(rep, path):
    node = rep
    for key in path.strip("/").split("/")[:-1]:
        node = node[int(key)] if isinstance(node, list) else node[key]
    return node


@pytest.mark.parametrize("command,index", [("index", 0), ("check", None), ("solve", 6)])
def test_numbers_finite_or_explained(tmp_path, capsys, command, index):
    path = str(corpus_files()[index]) if index is not None else write(tmp_path, problem(a="t - 1"))
    _, rep = run(capsys, command, path)
    reasons = rep.get("null_reasons", {})
    for where, value in walk_numbers(rep):
        if value is None:
            parent = _parent(rep, where)
            assert where in reasons or (isinstance(parent, dict) and parent.get("reason")), where
        elif isinstance(value, float):
            assert value == value and abs(value) != float("inf")


def test_non_finite_values_become_null_with_reason():
    rep = finalize({"command": "check", "x": {"gap": float("inf")}, "y": [1.0, float("nan")]})
    assert rep["x"]["gap"] is None and rep["y"][1] is None
    assert set(rep["null_reasons"]) == {"/x/gap", "/y/1"}


def test_module_entry_point(tmp_path):
    path = write(tmp_path, problem())
    proc = subprocess.run([sys.executable, "-m", "carleman", "check", path],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "noetherian"


@pytest.mark.parametrize("verdict", sorted(EXIT_CODES))
def test_exit_codes_are_bijective(verdict):
    assert list(EXIT_CODES.values()).count(EXIT_CODES[verdict]) == 1
