"""CLI contract tests: flags, files, exit codes, reproducibility."""

import json

import numpy as np
import pytest

from jumpfbst.cli import main
from jumpfbst.dataset import Kind, read_series
from jumpfbst.fbst import load_cloud


def _run(argv):
    return main(argv)


@pytest.fixture(scope="module")
def sim_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "returns.csv"
    code = _run(["simulate", "--n", "40", "--mu", "5", "--sigma", "0.2",
                 "--eta", "0.35", "--k", "1", "--seed", "3",
                 "--out", str(path)])
    assert code == 0
    return path


@pytest.fixture(scope="module")
def test_outputs(sim_file, tmp_path_factory):
    out = tmp_path_factory.mktemp("cli_test")
    report = out / "report.json"
    cloud = out / "cloud.bin"
    code = _run(["test", "--data", str(sim_file), "--kind", "returns",
                 "--samples", "60000", "--null-samples", "60000", "--seed", "11",
                 "--report", str(report), "--cloud", str(cloud)])
    assert code == 0
    return sim_file, report, cloud


def test_simulate_deterministic_output(tmp_path, sim_file):
    again = tmp_path / "again.csv"
    code = _run(["simulate", "--n", "40", "--mu", "5", "--sigma", "0.2",
                 "--eta", "0.35", "--k", "1", "--seed", "3",
                 "--out", str(again)])
    assert code == 0
    assert again.read_bytes() == sim_file.read_bytes()


def test_simulate_round_trips_through_ingestion(sim_file):
    from jumpfbst.simulate import SimConfig, simulate_returns
    ds = read_series(sim_file, Kind.RETURNS)
    direct = simulate_returns(SimConfig(n=40, mu=5.0, sigma=0.2, eta=0.35, k=1.0, seed=3))
    assert np.array_equal(ds.values, direct)  # 17-digit serialization is lossless


def test_simulate_price_path_mode(tmp_path):
    out = tmp_path / "path.csv"
    code = _run(["simulate", "--n", "10", "--mu", "0.01", "--sigma", "0.1",
                 "--eta", "0.1", "--seed", "5", "--out", str(out),
                 "--path", "--s0", "100"])
    assert code == 0
    values = [float(line) for line in out.read_text().splitlines()]
    assert len(values) == 11
    assert values[0] == 100.0


def test_report_fields_and_detection(test_outputs):
    _, report, _ = test_outputs
    doc = json.loads(report.read_text())
    assert list(doc) == ["ev", "kappa0", "log_phi0", "n_support", "n_null",
                         "seed", "mode", "mean", "ess"]
    assert doc["ev"] <= 0.05          # strong jumps in this series
    assert doc["n_support"] == 60000
    assert doc["seed"] == 11
    assert 0.2 <= doc["mode"]["eta"] <= 0.55


def test_cloud_file_reusable(test_outputs):
    sim_file, _, cloud_path = test_outputs
    cloud = load_cloud(cloud_path)
    ds = read_series(sim_file, Kind.RETURNS)
    from jumpfbst.fbst import data_digest
    assert cloud.data_digest == data_digest(ds.standardized)
    assert len(cloud) == 60000


def test_risk_outputs(test_outputs, tmp_path):
    sim_file, _, cloud_path = test_outputs
    surv = tmp_path / "survival.csv"
    times = tmp_path / "times.csv"
    code = _run(["risk", "--data", str(sim_file), "--kind", "returns",
                 "--cloud", str(cloud_path),
                 "--thresholds", "5.2,5.6,6.0,6.4", "--horizon", "50",
                 "--out-survival", str(surv), "--out-times", str(times)])
    assert code == 0

    lines = surv.read_text().splitlines()
    assert lines[0].startswith("#")
    assert lines[1] == "t,5.2000000000000002,5.5999999999999996,6,6.4000000000000004"
    assert len(lines) == 2 + 51
    first = lines[2].split(",")
    assert first[0] == "0" and all(float(v) == 1.0 for v in first[1:])
    # non-increasing in t per column, non-decreasing across thresholds per row
    rows = np.array([[float(v) for v in line.split(",")[1:]] for line in lines[2:]])
    assert np.all(np.diff(rows, axis=0) <= 1e-15)
    assert np.all(np.diff(rows, axis=1) >= -1e-15)

    tlines = times.read_text().splitlines()
    assert tlines[1] == "threshold,expected_time"
    parsed = [line.split(",") for line in tlines[2:]]
    assert [row[0] for row in parsed] == ["5.2000000000000002", "5.5999999999999996",
                                          "6", "6.4000000000000004"]
    values = [float(row[1]) for row in parsed]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_density_output(test_outputs, tmp_path):
    sim_file, _, cloud_path = test_outputs
    out = tmp_path / "density.csv"
    code = _run(["density", "--data", str(sim_file), "--kind", "returns",
                 "--cloud", str(cloud_path), "--grid", "128", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# bandwidth=")
    assert lines[1] == "y,empirical,fitted"
    assert len(lines) == 2 + 128
    grid = np.array([[float(v) for v in line.split(",")] for line in lines[2:]])
    # both densities integrate to ~1 over the grid
    dy = grid[1, 0] - grid[0, 0]
    assert np.trapezoid(grid[:, 1], dx=dy) == pytest.approx(1.0, abs=0.02)
    assert np.trapezoid(grid[:, 2], dx=dy) == pytest.approx(1.0, abs=0.02)


def test_cloud_data_mismatch_is_data_error(test_outputs, tmp_path):
    _, _, cloud_path = test_outputs
    other = tmp_path / "other.csv"
    _run(["simulate", "--n", "40", "--mu", "5", "--sigma", "0.2",
          "--eta", "0.35", "--k", "1", "--seed", "4", "--out", str(other)])
    code = _run(["risk", "--data", str(other), "--kind", "returns",
                 "--cloud", str(cloud_path), "--thresholds", "5.5",
                 "--horizon", "10", "--out-survival", str(tmp_path / "s.csv"),
                 "--out-times", str(tmp_path / "t.csv")])
    assert code == 2


def test_exit_code_usage_for_missing_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        _run(["test", "--kind", "returns", "--report", "r.json"])  # --data missing
    assert exc.value.code == 1
    capsys.readouterr()


def test_exit_code_usage_for_bad_parameter(tmp_path, sim_file):
    code = _run(["simulate", "--n", "10", "--eta", "1.5",
                 "--out", str(tmp_path / "x.csv")])
    assert code == 1


def test_exit_code_data_for_constant_series(tmp_path):
    bad = tmp_path / "const.csv"
    bad.write_text("2.0\n2.0\n2.0\n")
    code = _run(["test", "--data", str(bad), "--kind", "returns",
                 "--samples", "100", "--null-samples", "100",
                 "--report", str(tmp_path / "r.json")])
    assert code == 2


def test_exit_code_estimation_for_unreachable_threshold(test_outputs, tmp_path):
    sim_file, _, cloud_path = test_outputs
    code = _run(["risk", "--data", str(sim_file), "--kind", "returns",
                 "--cloud", str(cloud_path), "--thresholds", "1e12",
                 "--horizon", "5", "--out-survival", str(tmp_path / "s.csv"),
                 "--out-times", str(tmp_path / "t.csv")])
    assert code == 3


def test_config_file_precedence(sim_file, tmp_path):
    cfg = tmp_path / "fbst.cfg"
    cfg.write_text("# sampler knobs\nsamples = 5000\nnull_samples = 5000\nseed = 21\n")
    r1 = tmp_path / "r1.json"
    code = _run(["test", "--data", str(sim_file), "--kind", "returns",
                 "--config", str(cfg), "--report", str(r1)])
    assert code == 0
    doc1 = json.loads(r1.read_text())
    assert doc1["n_support"] == 5000 and doc1["seed"] == 21

    r2 = tmp_path / "r2.json"
    code = _run(["test", "--data", str(sim_file), "--kind", "returns",
                 "--config", str(cfg), "--seed", "22", "--report", str(r2)])
    assert code == 0
    doc2 = json.loads(r2.read_text())
    assert doc2["seed"] == 22  # flag beats config
    assert doc2["n_support"] == 5000  # config beats default


def test_repeated_test_runs_byte_identical(sim_file, tmp_path):
    outputs = []
    for tag in ("a", "b"):
        report = tmp_path / f"rep_{tag}.json"
        cloud = tmp_path / f"cloud_{tag}.bin"
        code = _run(["test", "--data", str(sim_file), "--kind", "returns",
                     "--samples", "20000", "--null-samples", "20000",
                     "--seed", "7", "--report", str(report), "--cloud", str(cloud)])
        assert code == 0
        outputs.append((report.read_bytes(), cloud.read_bytes()))
    assert outputs[0] == outputs[1]


def test_no_refine_mode_reports_raw_argmax(sim_file, tmp_path):
    reports = {}
    for flag, name in ((True, "raw"), (False, "refined")):
        path = tmp_path / f"{name}.json"
        argv = ["test", "--data", str(sim_file), "--kind", "returns",
                "--samples", "20000", "--null-samples", "20000",
                "--seed", "7", "--report", str(path)]
        if flag:
            argv.append("--no-refine-mode")
        assert _run(argv) == 0
        reports[name] = json.loads(path.read_text())
    assert reports["raw"]["log_phi0"] == reports["refined"]["log_phi0"]
    # refinement may only sharpen the mode, never change the evidence
    assert reports["raw"]["ev"] == reports["refined"]["ev"]
