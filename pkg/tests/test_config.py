"""Settings and logging setup."""

import json

import pytest
from pydantic import ValidationError

from src.config import Settings, get_settings
from src.utils.logging import get_logger, log_solver_run, setup_logging


@pytest.fixture(autouse=True)
def restore_logging():
    yield
    setup_logging()


class TestSettings:
    def test_defaults(self, monkeypatch):
        for name in ("SPARSEREC_ADMM_RHO", "SPARSEREC_LOG_LEVEL", "SPARSEREC_WORKERS"):
            monkeypatch.delenv(name, raising=False)
        s = Settings(_env_file=None)
        assert s.admm_rho == 1.0
        assert s.admm_relative_rho is True
        assert s.irl1_max_outer == 20
        assert s.workers == 1

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("SPARSEREC_ADMM_RHO", "2")
        monkeypatch.setenv("SPARSEREC_LOG_LEVEL", "debug")
        s = Settings(_env_file=None)
        assert s.admm_rho == 2.0
        assert s.log_level == "DEBUG"

    @pytest.mark.parametrize(
        "field, value",
        [("log_level", "LOUD"), ("log_format", "xml"), ("admm_rho", 0.0), ("workers", 0), ("irl1_eps", -1.0),
         ("admm_tol_rel", -1e-9), ("admm_alpha", 2.0)],
    )
    def test_invalid_values(self, field, value):
        with pytest.raises(ValidationError):
            Settings(_env_file=None, **{field: value})

    def test_cached_instance(self):
        assert get_settings() is get_settings()


class TestLogging:
    def test_json_lines_on_stderr(self, capsys):
        setup_logging(level="DEBUG", fmt="json")
        log_solver_run(get_logger("tests"), "admm", iterations=12, converged=True, objective=0.5)
        captured = capsys.readouterr()
        assert captured.out == ""
        record = json.loads(captured.err.strip().splitlines()[-1])
        assert record["message"] == "solver_finished"
        assert record["iterations"] == 12
        assert record["converged"] is True

    def test_level_filters_debug(self, capsys):
        setup_logging(level="WARNING", fmt="console")
        get_logger("tests").debug("hidden")
        assert "hidden" not in capsys.readouterr().err
