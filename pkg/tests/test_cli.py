import csv
import io
import json
import os
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from kippen.cli import main, matrix_from_json, matrix_to_json

NIL5 = '{"variant":"NilpotentDim5","b":0.5,"t":0.5}'
EXC_PLUS = '{"variant":"ExceptionalDim5","sign":"+","phi":0}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def jordan_file(tmp_path):
    path = tmp_path / "j2.json"
    path.write_text(json.dumps(matrix_to_json(np.array([[0, 1], [0, 0]]))))
    return str(path)


def test_construct_nilpotent5(capsys):
    code, out, _ = run(capsys, "construct", "--spec", NIL5)
    assert code == 0
    doc = json.loads(out)
    assert doc["n"] == 5 and doc["partial_isometry"] is True
    A = matrix_from_json(doc)
    assert A[1, 3] == pytest.approx(0.5)


def test_construct_exceptional_uses_c_plus(capsys):
    code, out, _ = run(capsys, "construct", "--spec", EXC_PLUS)
    A = matrix_from_json(json.loads(out))
    assert code == 0
    assert A[2, 3].real == pytest.approx(0.55495, abs=1e-5)


def test_invalid_parameter_exit_2(capsys):
    code, out, err = run(capsys, "construct", "--spec", '{"variant":"NilpotentDim4","b":1.5}')
    assert code == 2 and out == ""
    assert err.startswith("error: ") and err.count("\n") == 1
    assert "b must lie in [0, 1]" in err


@pytest.mark.parametrize("argv", [
    ["construct"],
    ["construct", "--spec", "{not json"],
    ["construct", "--spec", '{"variant":"Nope"}'],
    ["construct", "--spec", "/no/such/file.json"],
    ["sweep", "--spec", NIL5, "--grid", "4"],
    ["analyze", "--spec", NIL5, "--format", "svg"],
    ["rank-range", "--spec", NIL5, "--k", "9"],
    ["frobnicate"],
    ["reproduce", "--only", "nope"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error: ") and err.count("\n") == 1


def test_validate_half_diagonal(tmp_path, capsys):
    path = tmp_path / "d.json"
    path.write_text(json.dumps(matrix_to_json(np.diag([0.5, 0, 0]))))
    code, out, _ = run(capsys, "validate", "--matrix-file", str(path))
    assert code == 0
    assert json.loads(out) == {"partial_isometry": False, "defect": 0.375}


def test_validate_zero_matrix(tmp_path, capsys):
    path = tmp_path / "z.json"
    path.write_text(json.dumps(matrix_to_json(np.zeros((3, 3)))))
    _, out, _ = run(capsys, "validate", "--matrix-file", str(path))
    assert json.loads(out)["partial_isometry"] is True


def test_analyze_section_example(capsys):
    code, out, _ = run(capsys, "analyze", "--spec", NIL5, "--grid", "180", "--k", "1,3")
    rep = json.loads(out)
    assert code == 0
    assert rep["circular"] is False and rep["generic"] is True
    assert rep["partial_isometry"] is True and rep["reducible"] is False
    assert rep["rank_k"]["3"]["kind"] == "EmptySet"
    assert rep["numerical_radius"] == pytest.approx(0.79435, abs=1e-5)


def test_analyze_exceptional_flat_portion(capsys):
    _, out, _ = run(capsys, "analyze", "--spec", EXC_PLUS, "--grid", "180", "--k", "1")
    rep = json.loads(out)
    assert rep["generic"] is False
    (fp,) = rep["flat_portions"]
    ends = [complex(*e) for e in fp["endpoints"]]
    for z in ends:
        assert z.real == pytest.approx(0.62349, abs=1e-5)
    assert sorted(z.imag for z in ends) == pytest.approx([-0.08077, 0.08077], abs=1e-5)


def test_boundary_csv_jordan_radii(capsys, jordan_file):
    code, out, _ = run(capsys, "boundary", "--matrix-file", jordan_file, "--grid", "64")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["theta", "re", "im"]
    assert len(rows) == 65
    radii = [abs(complex(float(r[1]), float(r[2]))) for r in rows[1:]]
    assert max(abs(r - 0.5) for r in radii) < 1e-9


def test_boundary_max_modulus_section_example(capsys):
    _, out, _ = run(capsys, "boundary", "--spec", NIL5, "--grid", "720")
    rows = list(csv.reader(io.StringIO(out)))[1:]
    pts = [complex(float(r[1]), float(r[2])) for r in rows]
    far = max(pts, key=abs)
    assert abs(far) == pytest.approx(0.79435, abs=1e-4)
    assert far.real < 0


def test_boundary_svg_structure(capsys):
    _, out, _ = run(capsys, "boundary", "--spec", EXC_PLUS, "--grid", "90", "--format", "svg")
    root = ET.fromstring(out)
    ns = "{http://www.w3.org/2000/svg}"
    assert root.get("viewBox") == "0 0 800 800"
    assert len(root.findall(f".//{ns}path")) == 1
    assert len(root.findall(f".//{ns}circle")) == 2  # flat-portion endpoints


def test_sweep_json(capsys, jordan_file):
    _, out, _ = run(capsys, "sweep", "--matrix-file", jordan_file, "--grid", "8",
                    "--format", "json")
    doc = json.loads(out)
    assert np.allclose(doc["eigs"], [[0.5, -0.5]] * 8)


def test_rank_range_verdicts(capsys, jordan_file):
    _, out, _ = run(capsys, "rank-range", "--matrix-file", jordan_file,
                    "--grid", "90", "--k", "1", "--k", "2", "--format", "json")
    kinds = [v["kind"] for v in json.loads(out)]
    assert kinds == ["Polygon", "EmptySet"]


def test_random_spec_uses_seed(capsys):
    spec = '{"variant":"Random","n":4,"rank":2}'
    _, a, _ = run(capsys, "construct", "--spec", spec, "--seed", "1")
    _, b, _ = run(capsys, "construct", "--spec", spec, "--seed", "1")
    _, c, _ = run(capsys, "construct", "--spec", spec, "--seed", "2")
    assert a == b != c
    assert json.loads(a)["partial_isometry"] is True


def test_constants_and_exact(capsys):
    _, out, _ = run(capsys, "constants")
    assert json.loads(out)["c_plus"] == pytest.approx(0.554958132087, abs=1e-12)
    _, exact, _ = run(capsys, "constants", "--exact")
    assert json.loads(exact)["c_plus"] == 0.5549581320873712


def test_out_file(tmp_path, capsys, jordan_file):
    target = tmp_path / "b.csv"
    code, out, _ = run(capsys, "boundary", "--matrix-file", jordan_file,
                       "--grid", "8", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("theta,re,im\n")


def test_reproduce_only_and_json(capsys):
    code, out, _ = run(capsys, "reproduce", "--only", "c-constants")
    assert code == 0
    assert out.startswith("PASS c-constants")
    assert "0.55495" in out and "0.80193" in out
    code, out, _ = run(capsys, "reproduce", "--only", "c-constants",
                       "--only", "spectrum-5", "--json")
    doc = json.loads(out)
    assert code == 0 and [d["id"] for d in doc] == ["c-constants", "spectrum-5"]
    assert all(d["passed"] for d in doc)


def test_subprocess_byte_identical_with_no_color():
    argv = [sys.executable, "-m", "kippen", "boundary", "--spec", EXC_PLUS,
            "--grid", "64", "--format", "svg"]
    env = dict(os.environ, NO_COLOR="1")
    first = subprocess.run(argv, capture_output=True, env=env, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second
    assert b"\x1b[" not in first
