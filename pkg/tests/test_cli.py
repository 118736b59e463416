import csv
import json

import numpy as np
import pytest

from casimir_polder import __version__
from casimir_polder import cli
from casimir_polder.potential import cp_imagfreq_oracle


@pytest.fixture
def atom_files(tmp_path):
    a = tmp_path / "a.json"
    a.write_text(json.dumps({"name": "two-level", "transitions": [{"k": 1.0, "mu2": 1.0}]}))
    b = tmp_path / "b.json"
    b.write_text(json.dumps({"name": "three-level", "transitions": [
        {"k": 0.7, "mu2": 0.5}, {"k": 1.0, "mu2": 1.0}, {"k": 2.3, "mu2": 0.8}]}))
    return str(a), str(b)


def _run(args):
    return cli.main([str(x) for x in args])


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_imagfreq_curve(atom_files, tmp_path):
    a, _ = atom_files
    out = tmp_path / "curve.csv"
    assert _run(["--atom-a", a, "--atom-b", a, "--rmin", 0.1, "--rmax", 100, "--points", 64,
                 "--method", "imagfreq", "--out", out]) == 0
    rows = _read_csv(out)
    assert rows[0] == ["R", "energy", "error_estimate", "method", "conjectural"]
    E = np.array([float(r[1]) for r in rows[1:]])
    assert E.size == 64 and np.all(E < 0) and np.all(np.diff(E) > 0)
    assert {r[3] for r in rows[1:]} == {"imagfreq"} and {r[4] for r in rows[1:]} == {"false"}


def test_correlation_curve_matches_imagfreq(atom_files, tmp_path):
    a, b = atom_files
    files = {}
    for method in ("imagfreq", "correlation"):
        files[method] = tmp_path / f"{method}.csv"
        assert _run(["--atom-a", a, "--atom-b", b, "--points", 12, "--method", method,
                     "--out", files[method]]) == 0
    e1 = np.array([float(r[1]) for r in _read_csv(files["imagfreq"])[1:]])
    e2 = np.array([float(r[1]) for r in _read_csv(files["correlation"])[1:]])
    assert np.allclose(e2, e1, rtol=1e-3, atol=0)


def test_thermal_rows_are_conjectural(atom_files, tmp_path):
    a, _ = atom_files
    out = tmp_path / "thermal.csv"
    assert _run(["--atom-a", a, "--atom-b", a, "--points", 3, "--method", "thermal",
                 "--temperature", 0.01, "--out", out]) == 0
    rows = _read_csv(out)[1:]
    assert all(r[3] == "thermal" and r[4] == "true" for r in rows)


def test_modesum_curve(atom_files, tmp_path):
    a, _ = atom_files
    out = tmp_path / "box.csv"
    assert _run(["--atom-a", a, "--atom-b", a, "--rmin", 1, "--rmax", 3, "--points", 2,
                 "--method", "modesum", "--out", out]) == 0
    for row in _read_csv(out)[1:]:
        R, E = float(row[0]), float(row[1])
        assert E == pytest.approx(cp_imagfreq_oracle(*[cli.load_atom_model(a)] * 2, R).energy, rel=1e-4)


def test_temperature_requires_thermal(atom_files, capsys):
    a, _ = atom_files
    assert _run(["--atom-a", a, "--atom-b", a, "--method", "imagfreq", "--temperature", 1]) == 1
    assert "temperature requires thermal method" in capsys.readouterr().err


@pytest.mark.parametrize("args", [
    ["--rmin", 2, "--rmax", 1],
    ["--points", 1],
    ["--method", "magic"],
    ["--spacing", "cubic"],
    ["--method", "thermal", "--temperature", -1],
])
def test_config_errors_exit_1(atom_files, args):
    a, _ = atom_files
    assert _run(["--atom-a", a, "--atom-b", a, *args]) == 1


def test_atom_file_errors_exit_2(atom_files, tmp_path, capsys):
    a, _ = atom_files
    assert _run(["--atom-a", tmp_path / "missing.json", "--atom-b", a]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"transitions": [{"k": 1, "mu2": 1, "spin": 2}]}')
    assert _run(["--atom-a", a, "--atom-b", bad]) == 2
    assert "transitions[0].spin" in capsys.readouterr().err


def test_numerical_failure_exit_3(atom_files, monkeypatch, capsys):
    from casimir_polder import potential
    from casimir_polder.quadrature import QuadratureError

    real = potential.evaluate

    def failing(atomA, atomB, R, *args, **kwargs):
        if R > 5:
            raise QuadratureError("did not converge")
        return real(atomA, atomB, R, *args, **kwargs)

    monkeypatch.setattr(potential, "evaluate", failing)
    a, _ = atom_files
    assert _run(["--atom-a", a, "--atom-b", a, "--rmin", 1, "--rmax", 10, "--points", 2]) == 3
    assert "R=10.0" in capsys.readouterr().err


def test_workers_env(atom_files, tmp_path, monkeypatch):
    a, b = atom_files
    out1, out2 = tmp_path / "w1.csv", tmp_path / "w2.csv"
    assert _run(["--atom-a", a, "--atom-b", b, "--points", 6, "--out", out1]) == 0
    monkeypatch.setenv(cli.WORKERS_ENV, "2")
    assert _run(["--atom-a", a, "--atom-b", b, "--points", 6, "--out", out2]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    monkeypatch.setenv(cli.WORKERS_ENV, "zero")
    assert _run(["--atom-a", a, "--atom-b", b, "--points", 6, "--out", out2]) == 1


def test_json_provenance(atom_files, tmp_path):
    a, b = atom_files
    out = tmp_path / "curve.json"
    assert _run(["--atom-a", a, "--atom-b", b, "--points", 3, "--format", "json", "--out", out]) == 0
    doc = json.loads(out.read_text())
    prov = doc["provenance"]
    assert prov["version"] == __version__
    assert prov["config"]["atom_b"] == b and prov["config"]["points"] == 3
    assert prov["tolerances"] == {"oracle": 1e-6}
    assert len(doc["records"]) == 3 and doc["records"][0]["method"] == "imagfreq"


def test_reference_length_columns(atom_files, tmp_path):
    a, _ = atom_files
    out = tmp_path / "si.csv"
    assert _run(["--atom-a", a, "--atom-b", a, "--points", 2, "--reference-length", 1e-9, "--out", out]) == 0
    rows = _read_csv(out)
    assert rows[0][-2:] == ["R_m", "energy_J"]
    assert float(rows[1][5]) == pytest.approx(float(rows[1][0]) * 1e-9)


def test_far_and_near_reports(atom_files, tmp_path):
    a, _ = atom_files
    for zone in ("far", "near"):
        out = tmp_path / f"{zone}.json"
        assert _run(["report", zone, "--atom-a", a, "--atom-b", a, "--out", out]) == 0
        doc = json.loads(out.read_text())
        assert doc["exponent"] == (7 if zone == "far" else 6)
        assert doc["relative_deviation"] < 1e-2
        assert doc["provenance"]["version"] == __version__


def test_report_zone_violation(atom_files, capsys):
    a, _ = atom_files
    assert _run(["report", "far", "--atom-a", a, "--atom-b", a, "--rmin", 10, "--rmax", 50]) == 1
    assert "k_min*R >= 100" in capsys.readouterr().err


def test_box_report(atom_files, tmp_path):
    a, _ = atom_files
    out = tmp_path / "box.json"
    assert _run(["report", "box", "--atom-a", a, "--atom-b", a, "--box-sizes", "10,20", "--out", out]) == 0
    doc = json.loads(out.read_text())
    assert doc["monotone"] and len(doc["rows"]) == 2
    assert doc["rows"][1]["deviation"] < doc["rows"][0]["deviation"]
