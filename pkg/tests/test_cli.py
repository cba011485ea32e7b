import json

import pytest

import realbloch.cli as cli


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


def test_sphere_chern_classify_run(tmp_path):
    config = {
        "lattice": {"topology": "sphere2", "n_theta": 12, "n_phi": 16},
        "model": {"name": "degree_k_sphere", "params": {"k": 2}},
        "bands": [0],
        "tasks": ["chern", "classify"],
    }
    path = write_config(tmp_path, config)
    code = cli.main(["run", str(path), "--out", str(tmp_path / "out")])
    assert code == cli.EXIT_OK
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["chern"]["chern_number"] == 2
    assert report["classify"]["free"] == [2]
    assert (tmp_path / "out" / "curvature.csv").exists()
    header = (tmp_path / "out" / "curvature.csv").read_text().splitlines()[0]
    assert header == "x,y,berry_curvature"


def test_mobius_holonomy_classify_run(tmp_path):
    config = {
        "lattice": {"topology": "circle", "n_sites": 64, "kind": "trivial"},
        "model": {"name": "mobius_circle"},
        "tasks": ["holonomy", "classify"],
    }
    path = write_config(tmp_path, config)
    code = cli.main(["run", str(path), "--out", str(tmp_path / "out")])
    assert code == cli.EXIT_OK
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["classify"]["torsion"] == [-1]
    loops = report["holonomy"]["fixed_loops"]
    assert len(loops) == 1
    assert loops[0]["sign"] == -1
    assert abs(loops[0]["trace_re"] + 1.0) <= 1e-9


def test_empty_tasks_is_config_error(tmp_path):
    config = {
        "lattice": {"topology": "circle", "n_sites": 16, "kind": "trivial"},
        "model": {"name": "mobius_circle"},
        "tasks": [],
    }
    path = write_config(tmp_path, config)
    code = cli.main(["run", str(path), "--out", str(tmp_path / "out")])
    assert code == cli.EXIT_CONFIG


def test_unknown_model_and_task(tmp_path):
    base = {
        "lattice": {"topology": "circle", "n_sites": 16, "kind": "trivial"},
        "model": {"name": "nope"},
        "tasks": ["classify"],
    }
    path = write_config(tmp_path, base)
    assert cli.main(["run", str(path), "--out", str(tmp_path / "o1")]) == cli.EXIT_CONFIG
    bad_task = dict(base, model={"name": "mobius_circle"}, tasks=["fly"])
    path2 = write_config(tmp_path, bad_task, "c2.json")
    assert cli.main(["run", str(path2), "--out", str(tmp_path / "o2")]) == cli.EXIT_CONFIG


def test_gap_closure_exit_code(tmp_path):
    config = {
        "lattice": {"topology": "circle", "n_sites": 8, "kind": "trivial"},
        "model": {"name": "constant_diag", "params": {"entries": [0.0, 0.0]}},
        "bands": [0],
        "tasks": ["check-symmetry"],
    }
    path = write_config(tmp_path, config)
    code = cli.main(["run", str(path), "--out", str(tmp_path / "out")])
    assert code == cli.EXIT_GAP
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["error"]["kind"] == "gap-closure"
    assert "hint" in report["error"]["message"]


def test_symmetry_violation_exit_code(tmp_path):
    # mobius pullback J on the wrong torus involution breaks equivariance
    config = {
        "lattice": {"topology": "torus2", "n1": 8, "n2": 8, "kind": "eta1"},
        "model": {"name": "mobius_pullback_torus"},
        "tasks": ["classify"],
    }
    path = write_config(tmp_path, config)
    code = cli.main(["run", str(path), "--out", str(tmp_path / "out")])
    assert code == cli.EXIT_SYMMETRY


def test_moduli_task(tmp_path):
    config = {
        "lattice": {"topology": "circle", "n_sites": 16, "kind": "reflection"},
        "model": {"name": "flat_line", "params": {"a": 0.25}},
        "tasks": ["moduli"],
        "moduli_values": [0.0, 0.25, 0.5],
    }
    path = write_config(tmp_path, config)
    assert cli.main(["run", str(path), "--out", str(tmp_path / "out")]) == cli.EXIT_OK
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    vals = {round(entry["a"], 3): entry for entry in report["moduli"]}
    assert vals[0.0]["holonomy_re"] == pytest.approx(1.0)
    assert vals[0.5]["holonomy_re"] == pytest.approx(-1.0)
    assert vals[0.25]["holonomy_im"] == pytest.approx(-1.0)


def test_oscillator_oracle_task(tmp_path):
    config = {
        "lattice": {"topology": "torus2", "n1": 8, "n2": 8, "kind": "eta1"},
        "model": {"name": "oscillator", "params": {"n_basis": 30}},
        "bands": [0],
        "tasks": ["check-symmetry", "berry", "oscillator-oracle"],
    }
    path = write_config(tmp_path, config)
    assert cli.main(["run", str(path), "--out", str(tmp_path / "out")]) == cli.EXIT_OK
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["check_symmetry"]["hamiltonian_residual"] <= 1e-10
    assert report["oscillator_oracle"]["connection_max_deviation"] < 0.05
    assert (tmp_path / "out" / "connection.csv").exists()


def test_report_byte_stability(tmp_path):
    config = {
        "lattice": {"topology": "sphere2", "n_theta": 8, "n_phi": 8},
        "model": {"name": "degree_k_sphere", "params": {"k": 1}},
        "bands": [0],
        "tasks": ["chern"],
    }
    path = write_config(tmp_path, config)
    cli.main(["run", str(path), "--out", str(tmp_path / "a")])
    cli.main(["run", str(path), "--out", str(tmp_path / "b")])
    assert (tmp_path / "a" / "report.json").read_bytes() == (
        tmp_path / "b" / "report.json"
    ).read_bytes()
    # thread count does not change the numbers
    cli.main(["run", str(path), "--out", str(tmp_path / "c"), "--threads", "4"])
    assert (tmp_path / "a" / "report.json").read_bytes() == (
        tmp_path / "c" / "report.json"
    ).read_bytes()


def test_resolution_scale_flag(tmp_path):
    config = {
        "lattice": {"topology": "circle", "n_sites": 16, "kind": "trivial"},
        "model": {"name": "mobius_circle"},
        "tasks": ["classify"],
    }
    path = write_config(tmp_path, config)
    code = cli.main(
        ["run", str(path), "--out", str(tmp_path / "out"), "--resolution-scale", "2"]
    )
    assert code == cli.EXIT_OK
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["lattice"]["n_sites"] == 32
    assert report["classify"]["torsion"] == [-1]
