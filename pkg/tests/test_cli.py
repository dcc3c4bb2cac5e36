import csv
import io
import json

import numpy as np
import pytest

from envlab.cli import main


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def space_file(tmp_path):
    return write(tmp_path, "space.json", {"n": 3, "p": 3, "weights": [1, 1, 1]})


@pytest.fixture
def subspace_file(tmp_path):
    return write(tmp_path, "sub.json", {"basis": [[1, 1, 1], [1, 1, 2]]})


def test_env_command_reports_collapse(tmp_path, space_file, subspace_file, capsys):
    out = tmp_path / "report.json"
    rc = main(["env", "--space", space_file, "--subspace", subspace_file, "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["command"] == "env" and rep["version"]
    assert all(rep["outputs"]["equal"].values())
    assert rep["outputs"]["chain"]["contains_input"]
    assert rep["outputs"]["minimal"]["dim"] == 2


def test_env_command_hilbert_note(tmp_path, subspace_file):
    space2 = write(tmp_path, "s2.json", {"n": 3, "p": 2, "weights": [1, 1, 1]})
    out = tmp_path / "rep.json"
    rc = main(["env", "--space", space2, "--subspace", subspace_file, "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["outputs"]["envelopes"]["isometric"]["dim"] == 2
    assert "p=2" in rep["outputs"]["note"]


def test_env_weight_starved_strict_inclusion(tmp_path, subspace_file):
    space3 = write(tmp_path, "s3.json", {"n": 3, "p": 3, "weights": [1, 2, 4]})
    out = tmp_path / "rep.json"
    rc = main(["env", "--space", space3, "--subspace", subspace_file, "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    envs = rep["outputs"]["envelopes"]
    assert envs["conditional"]["dim"] == 2
    assert envs["isometric"]["dim"] == 3
    assert rep["outputs"]["equal"]["conditional==isometric"] is False
    assert rep["outputs"]["chain"]["minimal<=isometric"]


def test_env_round_trip_determinism(tmp_path, space_file, subspace_file):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    main(["env", "--space", space_file, "--subspace", subspace_file, "--out", str(out1)])
    main(["env", "--space", space_file, "--subspace", subspace_file, "--out", str(out2)])
    a = json.loads(out1.read_text())
    b = json.loads(out2.read_text())
    a.pop("wall_time_ms"), b.pop("wall_time_ms")
    assert a == b


def test_verify_command_pass(tmp_path, capsys):
    out = tmp_path / "rep.json"
    rc = main(["verify", "--suite", "euclidean-growth", "--trials", "16", "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["outputs"]["failures"] == 0
    assert "PASS" in capsys.readouterr().err


def test_verify_unknown_suite():
    assert main(["verify", "--suite", "nope"]) == 2


def test_verify_failure_exit_code(monkeypatch):
    from envlab import suites

    def failing(trials=1, seed=42, tol=0.0):
        return suites.SuiteResult("stub", 1, 0, 1, 1.0, 0, ["forced failure"])

    monkeypatch.setitem(suites.SUITES, "stub", failing)
    assert main(["verify", "--suite", "stub"]) == 1


def test_env_var_seed_default(tmp_path, monkeypatch):
    monkeypatch.setenv("ENVLAB_SEED", "777")
    out = tmp_path / "rep.json"
    rc = main(["c2", "--grid", "2:2:1", "--out", str(tmp_path / "c.csv")])
    assert rc == 0
    rep = json.loads((tmp_path / "c.csv.report.json").read_text())
    assert rep["seed"] == 777


def test_c2_csv_rows(tmp_path):
    out = tmp_path / "c2.csv"
    rc = main(["c2", "--grid", "1.1:6:0.1", "--out", str(out)])
    assert rc == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == 50
    assert all(row["monotone_flag"] == "1" for row in rows)
    report = json.loads((tmp_path / "c2.csv.report.json").read_text())
    assert report["outputs"]["rows"] == 50
    assert report["outputs"]["monotone_all"] is True


def test_c2_bad_grid():
    assert main(["c2", "--grid", "nope"]) == 2


def test_proj_command(tmp_path, space_file):
    sub = write(tmp_path, "line.json", {"basis": [[1, 2, 0]]})
    out = tmp_path / "rep.json"
    rc = main(["proj", "--space", space_file, "--subspace", sub, "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["outputs"]["search"]["upper_bound"] <= 1 + 1e-9
    assert rep["outputs"]["one_complemented"]["verdict"] is True
    assert rep["outputs"]["search"]["seed"] == 42


def test_pushout_search_command(tmp_path):
    out = tmp_path / "rep.json"
    rc = main(["pushout", "--tries", "50", "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["outputs"]["lambda_in_base"] >= 1.01
    assert rep["outputs"]["lambda_in_quotient"] >= 1.005


def test_pushout_explicit_subspace(tmp_path):
    space1 = write(tmp_path, "l1.json", {"n": 3, "p": 1, "weights": [1, 1, 1]})
    sub = write(tmp_path, "ker.json", {"basis": [[1, -1, 0], [0, 1, -1]]})
    out = tmp_path / "rep.json"
    rc = main(["pushout", "--space", space1, "--subspace", sub, "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["outputs"]["kernel_residual"] <= 1e-9
    assert max(rep["outputs"]["copy_norms"]) <= 1 + 1e-6
    assert rep["outputs"]["lambda_glued"] >= 4.0 / 3.0 - 1e-6


def test_ergodic_command(tmp_path, space_file):
    shift = [[0, 0, 1], [1, 0, 0], [0, 1, 0]]
    lazy = (0.5 * np.eye(3) + 0.5 * np.array(shift)).tolist()
    op = write(tmp_path, "op.json", {"entries": lazy})
    x = write(tmp_path, "x.json", [1, 0, 0])
    out = tmp_path / "rep.json"
    rc = main([
        "ergodic", "--space", space_file, "--op", op, "--x", x,
        "--tol", "1e-6", "--max-iter", str(2**24), "--out", str(out),
    ])
    assert rc == 0
    rep = json.loads(out.read_text())
    proj = np.array(rep["outputs"]["cesaro"]["projection"])
    np.testing.assert_allclose(proj, np.ones((3, 3)) / 3, atol=1e-5)
    np.testing.assert_allclose(rep["outputs"]["ergodic_value"], [1 / 3] * 3, atol=1e-5)


def test_ergodic_nonconvergence_exit_code(tmp_path, space_file):
    shift = [[0, 0, 1], [1, 0, 0], [0, 1, 0]]
    op = write(tmp_path, "op.json", {"entries": shift})
    rc = main([
        "ergodic", "--space", space_file, "--op", op, "--tol", "1e-12",
        "--max-iter", "8",
    ])
    assert rc == 3


def test_malformed_json_is_usage_error(tmp_path, subspace_file):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["env", "--space", str(bad), "--subspace", subspace_file]) == 2


def test_missing_file_is_usage_error(subspace_file):
    assert main(["env", "--space", "/nonexistent.json", "--subspace", subspace_file]) == 2


def test_emitted_json_reparses_canonically(tmp_path, space_file, subspace_file):
    out = tmp_path / "rep.json"
    main(["env", "--space", space_file, "--subspace", subspace_file, "--out", str(out)])
    rep = json.loads(out.read_text())
    text = json.dumps(rep, indent=2, sort_keys=True)
    assert json.loads(text) == rep
