"""Command-line interface."""

import json
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose
from typer.testing import CliRunner

from src.cli import app, main
from src.harness import CDF_HEADER, CURVE_HEADER, MEASURE_HEADER, PDF_HEADER, read_series_csv
from src.utils.logging import setup_logging

runner = CliRunner(mix_stderr=False)


@pytest.fixture(autouse=True)
def restore_logging():
    yield
    setup_logging()


def invoke(*args):
    return runner.invoke(app, ["--quiet", *map(str, args)])


def errors(result):
    """Standard error with console line wrapping undone."""
    return " ".join(result.stderr.split())


def write_csv(path, rows):
    np.savetxt(path, np.atleast_2d(rows), delimiter=",")
    return path


def parse_series(text):
    lines = text.strip().splitlines()
    rows = [line.split(",") for line in lines[1:]]
    return lines[0], np.array([[float(v) for v in row] for row in rows])


class TestSolve:
    def test_zero_observations(self, tmp_path):
        A = write_csv(tmp_path / "A.csv", np.random.default_rng(0).standard_normal((3, 5)))
        y = write_csv(tmp_path / "y.csv", np.zeros(3))
        out = tmp_path / "result.json"
        result = invoke("solve", "--matrix", A, "--y", y, "-o", out)
        assert result.exit_code == 0, result.stderr
        payload = json.loads(out.read_text())
        assert payload["xhat"] == [0.0] * 5
        assert payload["converged"] is True
        assert payload["m"] == 3 and payload["N"] == 5

    def test_simulated_problem(self, tmp_path):
        out = tmp_path / "result.json"
        result = runner.invoke(
            app,
            [
                "--seed", "3", "--quiet", "solve", "--simulate", "--N", "128", "--m", "48", "--s", "5",
                "--max-iter", "20000", "-o", str(out),
            ],
        )
        assert result.exit_code == 0, result.stderr
        payload = json.loads(out.read_text())
        assert payload["converged"] is True
        assert payload["stop_reason"] == "converged"
        assert payload["primal_residual"] <= payload["primal_tolerance"]
        assert payload["seed"] == 3
        assert payload["penalty"] == "weibull(k=1,sigma=1)"
        assert payload["rel_error"] <= 1e-3

    def test_lasso_to_stdout(self):
        result = invoke("solve", "--simulate", "--N", "40", "--m", "20", "--s", "2", "--penalty", "l1", "--lambda", "1e-3")
        assert result.exit_code == 0, result.stderr
        payload = json.loads(result.stdout)
        assert payload["solver"] == "l1"
        assert payload["penalty"] == "l1"

    def test_non_concave_penalty(self):
        result = invoke("solve", "--simulate", "--N", "20", "--m", "10", "--s", "2", "--penalty", "weibull(k=2,sigma=1)")
        assert result.exit_code == 1
        assert "concave" in errors(result)

    def test_non_convergence_exit_code(self):
        result = invoke("solve", "--simulate", "--N", "40", "--m", "20", "--s", "2", "--max-outer", "1")
        assert result.exit_code == 2
        assert json.loads(result.stdout)["converged"] is False

    def test_inner_iteration_cap_exit_code(self):
        result = invoke("solve", "--simulate", "--N", "40", "--m", "20", "--s", "2", "--max-iter", "1")
        assert result.exit_code == 2
        payload = json.loads(result.stdout)
        assert payload["converged"] is False
        assert payload["stop_reason"] in ("max_iter", "max_outer")
        assert "without converging" in errors(result)

    def test_missing_inputs(self):
        result = invoke("solve")
        assert result.exit_code == 1
        assert "--matrix" in errors(result)

    def test_unreadable_matrix(self, tmp_path):
        result = invoke("solve", "--matrix", tmp_path / "none.csv", "--y", tmp_path / "none.csv")
        assert result.exit_code == 1


class TestPenalty:
    def test_curve_passes_through_one(self, tmp_path):
        out = tmp_path / "curve.csv"
        result = invoke("penalty", "weibull(k=1,sigma=100)", "-o", out)
        assert result.exit_code == 0, result.stderr
        t, values = read_series_csv(out, CURVE_HEADER)
        assert values[np.flatnonzero(t == 1.0)[0]] == pytest.approx(1.0)
        inside = t <= 1.0
        assert np.all(np.abs(values[inside] - t[inside]) <= 1e-2)

    def test_curve_to_stdout(self):
        result = invoke("penalty", "exp(sigma=0.5)", "--t-max", "3", "--points", "7")
        assert result.exit_code == 0, result.stderr
        header, rows = parse_series(result.stdout)
        assert header == ",".join(CURVE_HEADER)
        assert 1.0 in rows[:, 0]

    def test_weights(self):
        result = invoke("penalty", "weibull(k=0.5,sigma=1)", "--weights", "--eps", "1e-8")
        assert result.exit_code == 0, result.stderr
        header, rows = parse_series(result.stdout)
        assert header == "t,weight"
        assert np.all(np.isfinite(rows[:, 1]))

    def test_density(self, tmp_path):
        out = tmp_path / "pdf.csv"
        result = invoke("penalty", "exp(sigma=0.5)", "--pdf", "--t-max", "3", "-o", out)
        assert result.exit_code == 0, result.stderr
        t, values = read_series_csv(out, PDF_HEADER)
        assert_allclose(values, 2.0 * np.exp(-2.0 * t), rtol=1e-12)

    def test_distribution_function(self):
        result = invoke("penalty", "weibull(k=0.5,sigma=1)", "--cdf", "--points", "11")
        assert result.exit_code == 0, result.stderr
        header, rows = parse_series(result.stdout)
        assert header == ",".join(CDF_HEADER)
        assert rows[0, 1] == 0.0
        assert_allclose(rows[:, 1], 1.0 - np.exp(-np.sqrt(rows[:, 0])), rtol=1e-12)

    def test_one_output_mode(self):
        result = invoke("penalty", "exp(sigma=1)", "--pdf", "--cdf")
        assert result.exit_code == 1
        assert "Choose one" in errors(result)

    def test_weight_singularity(self):
        result = invoke("penalty", "weibull(k=0.5,sigma=1)", "--weights", "--eps", "0")
        assert result.exit_code == 1

    def test_bad_spec(self):
        result = invoke("penalty", "weibull(k=0.5,,sigma=1)")
        assert result.exit_code == 1
        assert "position 14" in errors(result)


class TestMeasure:
    def test_compressible_signal(self, tmp_path):
        out = tmp_path / "measure.csv"
        result = invoke(
            "measure", "--family", "weibull", "--base", "k=1.5",
            "--theta", "0.001,0.01,0.1,1,10,100", "--compressible", "50", "-o", out,
        )
        assert result.exit_code == 0, result.stderr
        _, values = read_series_csv(out, MEASURE_HEADER)
        assert np.all(values < 50)
        assert np.all(np.diff(values) <= 1e-12)

    def test_signal_file(self, tmp_path):
        x = write_csv(tmp_path / "x.csv", np.zeros(4))
        result = invoke("measure", "--family", "exp", "--theta", "1,2", "--signal", x)
        assert result.exit_code == 0, result.stderr
        _, rows = parse_series(result.stdout)
        assert np.all(rows[:, 1] == 0.0)

    def test_invalid_grid_value(self):
        result = invoke("measure", "--family", "weibull", "--base", "k=1", "--theta", "1,-1,2", "--compressible", "5")
        assert result.exit_code == 0, result.stderr
        _, rows = parse_series(result.stdout)
        assert np.isnan(rows[1, 1])
        assert np.all(np.isfinite(rows[[0, 2], 1]))
        assert "theta=-1" in errors(result)

    def test_needs_one_signal(self, tmp_path):
        assert invoke("measure", "--family", "exp", "--theta", "1").exit_code == 1


class TestVerify:
    def test_gnsp_falsified(self, tmp_path):
        A = write_csv(tmp_path / "A.csv", [[1.0, 1.0]])
        result = invoke("verify", "--gnsp", "--matrix", A, "--s", "1", "--budget", "100")
        assert result.exit_code == 0, result.stderr
        report = json.loads(result.stdout)
        assert report["verdict"] == "FALSIFIED"
        assert report["certificate"] is False

    def test_gnsp_identity(self, tmp_path):
        A = write_csv(tmp_path / "A.csv", np.eye(3))
        result = invoke("verify", "--gnsp", "--matrix", A, "--s", "1", "--penalty", "weibull(k=0.5,sigma=1)")
        assert json.loads(result.stdout)["verdict"] == "NOT_FALSIFIED"

    def test_ssp_with_bound(self, tmp_path):
        A = write_csv(tmp_path / "A.csv", [[1.0, -1.0]])
        result = invoke("verify", "--ssp", "--matrix", A, "--penalty", "weibull(k=1,sigma=1)", "--s", "1", "--N", "4")
        assert result.exit_code == 0, result.stderr
        report = json.loads(result.stdout)
        assert report["delta_q"] == pytest.approx(2.0)
        assert report["mode"] == "EXACT"
        assert report["bound"]["bound_value"] == pytest.approx(4.0 * np.log(4.0))
        assert report["bound"]["verdict"] == "INAPPLICABLE"

    def test_ssp_empty_kernel(self, tmp_path):
        A = write_csv(tmp_path / "A.csv", np.eye(2))
        report = json.loads(invoke("verify", "--ssp", "--matrix", A, "--q", "2").stdout)
        assert report["infinite"] is True
        assert report["delta_q"] is None

    def test_irwin_hall(self):
        samples = 20_000
        result = invoke("verify", "--irwin-hall", "--penalty", "exp(sigma=1)", "--N", "12", "--samples", samples)
        assert result.exit_code == 0, result.stderr
        report = json.loads(result.stdout)
        assert abs(report["mean"] - 6.0) <= 5 * np.sqrt(1.0 / samples)

    def test_exactly_one_check(self, tmp_path):
        result = invoke("verify", "--gnsp", "--ssp")
        assert result.exit_code == 1
        assert "exactly one" in errors(result)


class TestSweep:
    CONFIG = {
        "N": 30,
        "m": 15,
        "sparsity_grid": [2, 3],
        "replicates": 2,
        "lambda": 1e-4,
        "penalties": ["l1", "weibull(k=0.5,sigma=1)"],
        "record_wall_time": False,
    }

    def write_config(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(self.CONFIG))
        return path

    def test_missing_config(self, tmp_path):
        result = invoke("sweep", "--config", tmp_path / "absent.json")
        assert result.exit_code == 1
        assert "not found" in errors(result)

    def test_invalid_config(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({**self.CONFIG, "m": 40}))
        assert invoke("sweep", "--config", path).exit_code == 1

    def test_outputs_are_reproducible(self, tmp_path):
        config = self.write_config(tmp_path)
        for name in ("a", "b"):
            result = invoke("sweep", "--config", config, "--output-dir", tmp_path / name)
            assert result.exit_code == 0, result.stderr
        first = (tmp_path / "a" / "results.csv").read_bytes()
        assert first == (tmp_path / "b" / "results.csv").read_bytes()
        assert first.decode().splitlines()[0] == "penalty,s,replicate,seed,rel_error,success,outer_iters,wall_time"
        assert len(first.decode().strip().splitlines()) == 1 + 2 * 2 * 2
        assert (tmp_path / "a" / "success_rates.csv").exists()

    def test_global_seed_and_out(self, tmp_path):
        config = self.write_config(tmp_path)
        result = runner.invoke(app, ["--seed", "9", "--out", str(tmp_path / "run"), "sweep", "--config", str(config)])
        assert result.exit_code == 0, result.stderr
        manifest = json.loads((tmp_path / "run" / "manifest.json").read_text())
        assert manifest["config"]["master_seed"] == 9
        assert manifest["records"] == 8


def test_entry_point_usage_error(monkeypatch):
    monkeypatch.setattr(sys, "argv", ["sparse-recovery", "solve", "--bogus"])
    with pytest.raises(SystemExit) as info:
        main()
    assert info.value.code == 1


def test_entry_point_success(monkeypatch, tmp_path, capsys):
    monkeypatch.setattr(sys, "argv", ["sparse-recovery", "--quiet", "penalty", "exp(sigma=1)", "--points", "3"])
    with pytest.raises(SystemExit) as info:
        main()
    assert info.value.code == 0
    assert capsys.readouterr().out.startswith("t,scaled_penalty")
