"""Shared fixtures and the --runslow switch."""

import numpy as np
import pytest

from src.penalties import Family, PenaltyModel
from src.solvers import MeasurementProblem


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow reproduction tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)


def _log_uniform(rng, low, high):
    return float(np.exp(rng.uniform(np.log(low), np.log(high))))


def random_params(family: Family, rng) -> dict:
    """A random valid parameterization of a family."""
    lu = lambda: _log_uniform(rng, 0.2, 5.0)  # noqa: E731
    if family is Family.DIRAC_DELTA:
        return {}
    if family is Family.SCAD_LINEAR:
        return {"lam": lu(), "gamma": 1.0 + lu()}
    if family is Family.MCP_LINEAR:
        return {"lam": lu(), "gamma": lu()}
    if family is Family.WEIBULL:
        return {"k": _log_uniform(rng, 0.3, 3.0), "sigma": lu()}
    if family is Family.GENERALIZED_GAMMA:
        return {"a": lu(), "d": _log_uniform(rng, 0.3, 3.0), "p": _log_uniform(rng, 0.5, 3.0)}
    if family is Family.GENERALIZED_BETA_PRIME:
        return {
            "p": _log_uniform(rng, 0.5, 2.0),
            "q": lu(),
            "alpha": _log_uniform(rng, 0.5, 3.0),
            "beta": _log_uniform(rng, 0.5, 3.0),
        }
    if family is Family.FOLDED_STUDENT_T:
        return {"nu": _log_uniform(rng, 0.5, 10.0)}
    names = {
        Family.UNIFORM: "gamma",
        Family.U_QUADRATIC: "b",
        Family.EXPONENTIAL: "sigma",
        Family.RAYLEIGH: "sigma",
        Family.CHI_SQUARED: "k",
        Family.FOLDED_NORMAL: "sigma",
        Family.FOLDED_CAUCHY: "sigma",
    }
    return {names[family]: lu()}


def random_model(family: Family, rng) -> PenaltyModel:
    return PenaltyModel(family, random_params(family, rng))


@pytest.fixture
def small_problem(rng):
    """Random 10 x 20 problem with a 3-sparse truth."""
    A = rng.standard_normal((10, 20)) / np.sqrt(10)
    x = np.zeros(20)
    x[[2, 7, 15]] = [1.5, -2.0, 0.7]
    return MeasurementProblem(A=A, y=A @ x, truth=x)
