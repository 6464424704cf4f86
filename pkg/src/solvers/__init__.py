"""Weighted-lasso ADMM, the l1 baseline and iteratively reweighted l1."""

from .admm import (
    AdmmSystem,
    objective,
    rescale_dual,
    soft_threshold,
    solve_l1,
    solve_weighted_lasso,
    weighted_lasso_objective,
)
from .irl1 import ASCENT_SLACK, check_irl1_model, irl1
from .types import AdmmConfig, Irl1Config, MeasurementProblem, SolveResult, StopReason

__all__ = [
    "ASCENT_SLACK",
    "AdmmConfig",
    "AdmmSystem",
    "Irl1Config",
    "MeasurementProblem",
    "SolveResult",
    "StopReason",
    "check_irl1_model",
    "irl1",
    "objective",
    "rescale_dual",
    "soft_threshold",
    "solve_l1",
    "solve_weighted_lasso",
    "weighted_lasso_objective",
]
