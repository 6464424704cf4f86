"""Recovery-condition verifiers and sparsity-measure diagnostics."""

from .bounds import (
    BoundReport,
    BoundSweep,
    BoundVerdict,
    SolutionPenaltyCheck,
    alpha_theta,
    bound_sweep,
    ceil_term,
    recovery_bound,
    solution_penalty_check,
    sparsity_threshold,
)
from .irwin_hall import IrwinHallReport, irwin_hall_cdf, irwin_hall_check
from .kernel import KernelParameterization, kernel_basis
from .measures import THETA_AXES, SparsitySweep, SweepPoint, sparsity_sweep
from .nsp import GnspOutcome, GnspVerdict, exhaustive_worst_support, gnsp_falsify, worst_case_support
from .spherical import DeltaMode, DeltaQEstimate, delta_q, section_ratio

__all__ = [
    "BoundReport",
    "BoundSweep",
    "BoundVerdict",
    "DeltaMode",
    "DeltaQEstimate",
    "GnspOutcome",
    "GnspVerdict",
    "IrwinHallReport",
    "KernelParameterization",
    "SolutionPenaltyCheck",
    "SparsitySweep",
    "SweepPoint",
    "THETA_AXES",
    "alpha_theta",
    "bound_sweep",
    "ceil_term",
    "delta_q",
    "exhaustive_worst_support",
    "gnsp_falsify",
    "irwin_hall_cdf",
    "irwin_hall_check",
    "kernel_basis",
    "recovery_bound",
    "section_ratio",
    "solution_penalty_check",
    "sparsity_sweep",
    "sparsity_threshold",
    "worst_case_support",
]
