"""CLI subcommands: outputs, exit codes, reproducibility."""

import json

import numpy as np
import pytest

import reluprop as rp
from reluprop import model_io
from reluprop.cli import main


@pytest.fixture()
def scalar_paths(tmp_path):
    model = model_io.ModelFile(
        m=1, p=1, a=np.array([[1.0]]), c=np.array([0.0]), beta=np.array([1.0]), d=0.0
    )
    mpath = tmp_path / "model.json"
    model_io.save_model_file(model, str(mpath))
    dist = model_io.DistFile(m=1, mean=np.array([0.0]), cov=np.array([[1.0]]))
    dpath = tmp_path / "dist.json"
    model_io.save_dist_file(dist, str(dpath))
    return str(mpath), str(dpath)


def test_propagate_scalar_fixture(scalar_paths, capsys):
    mpath, dpath = scalar_paths
    assert main(["propagate", "--model", mpath, "--dist", dpath]) == 0
    out = json.loads(capsys.readouterr().out)
    assert abs(out["mean"] - 0.3989422804014327) < 1e-10
    assert abs(out["variance"] - (0.5 - 1.0 / (2.0 * np.pi))) < 1e-10
    # >= 15 significant digits survive the round trip
    assert out["mean"] == float(repr(out["mean"]))


def test_propagate_beta_zero(tmp_path, capsys):
    model = model_io.ModelFile(
        m=1, p=1, a=np.array([[1.0]]), c=np.array([0.0]), beta=np.array([0.0]), d=-3.5
    )
    mpath = tmp_path / "m.json"
    model_io.save_model_file(model, str(mpath))
    dist = model_io.DistFile(m=1, mean=np.array([0.2]), cov=np.array([[1.0]]))
    dpath = tmp_path / "d.json"
    model_io.save_dist_file(dist, str(dpath))
    assert main(["propagate", "--model", str(mpath), "--dist", str(dpath)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {"mean": -3.5, "variance": 0.0}


def test_propagate_dimension_mismatch_exits_2(tmp_path, scalar_paths, capsys):
    mpath, _ = scalar_paths
    dist = model_io.DistFile(m=2, mean=np.zeros(2), cov=np.eye(2).tolist())
    dpath = tmp_path / "d2.json"
    model_io.save_dist_file(dist, str(dpath))
    assert main(["propagate", "--model", mpath, "--dist", str(dpath)]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error: shape:")


def test_propagate_schema_error_exits_2(tmp_path, scalar_paths, capsys):
    mpath, _ = scalar_paths
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema_version": "1", "m": 1}\n')
    assert main(["propagate", "--model", mpath, "--dist", str(bad)]) == 2
    assert capsys.readouterr().err.startswith("error: schema:")


def test_propagate_writes_identical_file(tmp_path, scalar_paths, capsys):
    mpath, dpath = scalar_paths
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert main(["propagate", "--model", mpath, "--dist", dpath, "--out", str(out1)]) == 0
    assert main(["propagate", "--model", mpath, "--dist", dpath, "--out", str(out2)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()


def test_validate_scalar_fixture_passes(scalar_paths, capsys):
    mpath, dpath = scalar_paths
    code = main(
        ["validate", "--model", mpath, "--dist", dpath, "--n", "200000", "--seed", "1"]
    )
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["status"] == "PASS"
    assert abs(report["z"]["mean"]) <= 4.0 and abs(report["z"]["variance"]) <= 4.0


def test_validate_deterministic_input_z_zero(tmp_path, capsys):
    mf = rp.gen_model(2, 12, seed=42)
    mpath = tmp_path / "m.json"
    model_io.save_model_file(mf, str(mpath))
    dist = model_io.DistFile(m=2, mean=np.array([0.3, -0.2]), cov=np.zeros((2, 2)))
    dpath = tmp_path / "d.json"
    model_io.save_dist_file(dist, str(dpath))
    code = main(["validate", "--model", str(mpath), "--dist", str(dpath), "--n", "1000", "--seed", "3"])
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["z"] == {"mean": 0.0, "variance": 0.0}
    assert report["diff"] == {"mean": 0.0, "variance": 0.0}


def test_validate_byte_identical_across_workers(tmp_path, scalar_paths, capsys):
    mpath, dpath = scalar_paths
    outs = []
    for workers, name in (("1", "w1.json"), ("8", "w8.json"), ("1", "w1b.json")):
        out = tmp_path / name
        main(
            [
                "validate", "--model", mpath, "--dist", dpath,
                "--n", "100000", "--seed", "9", "--workers", workers,
                "--out", str(out),
            ]
        )
        outs.append(out.read_bytes())
    capsys.readouterr()
    assert outs[0] == outs[1] == outs[2]


def test_converge_end_to_end(tmp_path, capsys):
    mf = rp.gen_model(2, 12, seed=42)
    cases_dir = tmp_path / "cases"
    cases_dir.mkdir()
    for i in range(12):
        rp.save_case(mf, rp.gen_dist(2, seed=500 + i), str(cases_dir / f"case_{i:03d}.json"))
    out = tmp_path / "rmse.csv"
    code = main(
        [
            "converge", "--cases", str(cases_dir), "--grid", "1000,4000,16000,64000",
            "--seed", "123", "--out", str(out),
            # wide window: short grids are noisy, exit-code wiring is the target
            "--slope-min", "-1.2", "--slope-max", "-0.1",
        ]
    )
    captured = capsys.readouterr()
    assert code == 0
    assert "slope_mean=" in captured.out and "slope_variance=" in captured.out
    rows = model_io.read_convergence_csv(str(out))
    assert [r[0] for r in rows] == [1000, 4000, 16000, 64000]


def test_converge_two_grid_points_warns(tmp_path, capsys):
    mf = rp.gen_model(2, 6, seed=1)
    cases_dir = tmp_path / "cases"
    cases_dir.mkdir()
    for i in range(10):
        rp.save_case(mf, rp.gen_dist(2, seed=50 + i), str(cases_dir / f"c{i}.json"))
    out = tmp_path / "r.csv"
    code = main(
        [
            "converge", "--cases", str(cases_dir), "--grid", "500,5000", "--seed", "3",
            "--out", str(out), "--slope-min", "-2.0", "--slope-max", "0.0",
        ]
    )
    captured = capsys.readouterr()
    assert code == 0
    assert "fewer than 3 grid points" in captured.err


def test_converge_empty_dir_exits_2(tmp_path, capsys):
    cases_dir = tmp_path / "empty"
    cases_dir.mkdir()
    out = tmp_path / "r.csv"
    code = main(["converge", "--cases", str(cases_dir), "--seed", "1", "--out", str(out)])
    assert code == 2
    assert capsys.readouterr().err.startswith("error: config:")


def test_converge_slope_window_exit_4(tmp_path, capsys):
    mf = rp.gen_model(2, 6, seed=2)
    cases_dir = tmp_path / "cases"
    cases_dir.mkdir()
    for i in range(10):
        rp.save_case(mf, rp.gen_dist(2, seed=80 + i), str(cases_dir / f"c{i}.json"))
    out = tmp_path / "r.csv"
    code = main(
        [
            "converge", "--cases", str(cases_dir), "--grid", "1000,8000", "--seed", "3",
            "--out", str(out), "--slope-min", "-0.001", "--slope-max", "0.0",
        ]
    )
    capsys.readouterr()
    assert code == 4


def test_gen_model_writes_loadable_fixture(tmp_path, capsys):
    out = tmp_path / "model.json"
    assert main(["gen-model", "--m", "2", "--p", "12", "--seed", "42", "--out", str(out)]) == 0
    model = model_io.load_model(str(out))
    assert model.n_inputs == 2 and model.n_hidden == 12
    # deterministic bytes
    out2 = tmp_path / "model2.json"
    main(["gen-model", "--m", "2", "--p", "12", "--seed", "42", "--out", str(out2)])
    capsys.readouterr()
    assert out.read_bytes() == out2.read_bytes()


def test_selftest_passes(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "overall: PASS" in out
    assert "phi2-oracle-grid" in out


def test_selftest_detects_injected_kernel_error(capsys):
    assert main(["selftest", "--inject-phi2-error", "1e-6"]) == 5
    out = capsys.readouterr().out
    assert "overall: FAIL" in out
    assert "FAIL" in [line.split()[1] for line in out.splitlines() if line.startswith("phi2")]
