"""CDF-induced separable penalties and their distribution catalog."""

from .distributions import BaseDistribution, Concavity, DistributionFactory, Family, ParamSpec
from .model import (
    PenaltyModel,
    cdf,
    cdf_by_quadrature,
    inverse_cdf,
    irl1_weight,
    pdf,
    penalty,
    quantile_by_bisection,
    scaled_penalty_curve,
)
from .spec_parser import ALIASES, CANONICAL_NAMES, format_penalty_spec, parse_penalty_spec, resolve_family

__all__ = [
    "ALIASES",
    "BaseDistribution",
    "CANONICAL_NAMES",
    "Concavity",
    "DistributionFactory",
    "Family",
    "ParamSpec",
    "PenaltyModel",
    "cdf",
    "cdf_by_quadrature",
    "format_penalty_spec",
    "inverse_cdf",
    "irl1_weight",
    "parse_penalty_spec",
    "pdf",
    "penalty",
    "quantile_by_bisection",
    "resolve_family",
    "scaled_penalty_curve",
]
