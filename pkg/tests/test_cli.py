import json

import numpy as np
import pytest

from bohmsim.commands.velocity import VELOCITY_COLUMNS
from bohmsim.main import EXIT_CHECKS_FAILED, EXIT_ERROR, EXIT_OK, build_parser, main, resolve_config
from bohmsim.tools.export import read_csv


def _write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def test_velocity_grid(tmp_path):
    assert main(["velocity", "--out", str(tmp_path), "--quiet"]) == EXIT_OK
    header, data = read_csv(tmp_path / "velocity_grid.csv")
    assert header == list(VELOCITY_COLUMNS)
    assert data.shape == (5 * 21 * 21, len(VELOCITY_COLUMNS))
    row = data[(data[:, 0] == -2.0) & np.isclose(data[:, 1], -2.0) & np.isclose(data[:, 2], 2.0)][0]
    cols = {name: row[i] for i, name in enumerate(VELOCITY_COLUMNS)}
    assert cols["v1_kg"] == pytest.approx(1.0, abs=1e-9)
    assert cols["v2_kg"] == pytest.approx(-1.0, abs=1e-9)
    assert cols["v1_m"] == pytest.approx(cols["v1_kg"], abs=1e-10)


def test_paraxial_velocity_grid(tmp_path):
    assert main(["velocity", "--dispersion", "paraxial", "--kz", "200", "--out", str(tmp_path), "--quiet"]) == EXIT_OK
    header, data = read_csv(tmp_path / "velocity_grid.csv")
    assert np.array_equal(data[:, 3], data[:, 5], equal_nan=True)


def test_paraxial_velocity_grid_rejects_a_boost(tmp_path):
    argv = ["velocity", "--dispersion", "paraxial", "--kz", "200", "--theta", "0.3", "--out", str(tmp_path), "--quiet"]
    assert main(argv) == EXIT_ERROR
    assert not (tmp_path / "velocity_grid.csv").exists()


def test_trajectories_command(tmp_path):
    cfg = _write(tmp_path / "run.json", {"ics": [[-2.0, 2.0], [-1.5, 2.5]], "time": {"t0": -2.0, "t1": -1.0}})
    assert main(["trajectories", "--config", cfg, "--out", str(tmp_path / "o"), "--quiet"]) == EXIT_OK
    header, data = read_csv(tmp_path / "o" / "trajectories.csv")
    assert header == ["pair_id", "t", "x1", "x2", "v1", "v2"]
    assert set(data[:, 0]) == {0.0, 1.0}
    bundle = json.loads((tmp_path / "o" / "trajectories.json").read_text())
    assert bundle["meta"]["n_pairs"] == 2
    assert bundle["meta"]["config"]["time"]["t1"] == -1.0


def test_snapshot_command(tmp_path):
    cfg = _write(tmp_path / "run.json", {"ensemble": {"n": 6, "seed": 1}, "time": {"t0": -2.0, "t1": 0.0}})
    args = ["snapshot", "--config", cfg, "--t", "-2", "--t", "-1", "--out", str(tmp_path), "--quiet"]
    assert main(args) == EXIT_OK
    header, data = read_csv(tmp_path / "snapshot_t-1.000.csv")
    assert header == ["pair_id", "x1", "x2"]
    assert data.shape == (6, 3)
    assert (tmp_path / "snapshot_t-2.000.csv").exists()


def test_snapshot_outside_the_window(tmp_path):
    assert main(["snapshot", "--t", "5", "--out", str(tmp_path), "--quiet"]) == EXIT_ERROR


def test_boost_command(tmp_path):
    cfg = _write(tmp_path / "run.json", {"ics": [[-2.0, 2.0]], "time": {"t0": -2.0, "t1": -1.0}})
    assert main(["boost", "--config", cfg, "--theta", "0.2", "--out", str(tmp_path), "--quiet"]) == EXIT_OK
    for name in ("boosted_mapped.csv", "boosted_reintegrated.csv", "boosted_equal_time.csv", "boost_summary.json"):
        assert (tmp_path / name).exists()
    summary = json.loads((tmp_path / "boost_summary.json").read_text())
    assert summary["theta"] == 0.2
    assert summary["discrepancy"]["reintegrated"] < 1e-5


def test_boost_needs_theta(tmp_path):
    assert main(["boost", "--out", str(tmp_path), "--quiet"]) == EXIT_ERROR


def test_metric_command(tmp_path):
    assert main(["metric", "--out", str(tmp_path), "--quiet"]) == EXIT_OK
    header, data = read_csv(tmp_path / "metric_map.csv")
    assert header == ["t", "x1", "x2", "vs1", "vs2"]
    assert data.shape == (81 * 161, 5)


def test_verify_selected_checks(tmp_path):
    args = ["verify", "--check", "metric", "--check", "rho_equality", "--out", str(tmp_path), "--quiet"]
    assert main(args) == EXIT_OK
    report = json.loads((tmp_path / "verify_report.json").read_text())
    assert report["passed"] is True
    assert [c["name"] for c in report["checks"]] == ["rho_equality", "metric"]


def test_verify_failure_exit_code(tmp_path):
    cfg = _write(tmp_path / "run.json", {"tolerances": {"fd_currents": 1e-300}})
    args = ["verify", "--config", cfg, "--check", "fd_currents", "--out", str(tmp_path), "--quiet"]
    assert main(args) == EXIT_CHECKS_FAILED


def test_bad_config_exit_code(tmp_path):
    cfg = _write(tmp_path / "run.json", {"theta": 1.5})
    assert main(["velocity", "--config", cfg, "--out", str(tmp_path), "--quiet"]) == EXIT_ERROR
    assert main(["velocity", "--theta", "-1.0", "--out", str(tmp_path), "--quiet"]) == EXIT_ERROR


def test_seed_flag_creates_an_ensemble():
    args = build_parser().parse_args(["trajectories", "--seed", "12"])
    run = resolve_config(args)
    assert run.ensemble is not None and run.ensemble.seed == 12


def test_unknown_check_is_rejected_by_the_parser():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["verify", "--check", "nope"])
