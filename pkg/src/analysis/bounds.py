"""Recovery error bound driven by the spherical-section constant and alpha = F^{-1}(1 - 1/N)."""

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..errors import DegenerateBoundError, DomainError
from ..penalties import PenaltyModel, inverse_cdf, penalty
from ..utils.logging import get_logger

logger = get_logger(__name__)


class BoundVerdict(enum.Enum):
    APPLICABLE = "APPLICABLE"
    INAPPLICABLE = "INAPPLICABLE"


def _exponent(q: float) -> float:
    q = float(q)
    if math.isnan(q) or q <= 1:
        raise DomainError(f"q must lie in (1, inf], got {q}")
    return 1.0 if math.isinf(q) else 1.0 - 1.0 / q


def _check_delta(delta_q: float) -> float:
    delta_q = float(delta_q)
    if not math.isfinite(delta_q) or delta_q <= 0:
        raise DomainError(f"delta_q must be a positive finite number, got {delta_q}")
    return delta_q


def ceil_term(delta_q: float) -> int:
    """ceil(Delta_q - 1), floored at 0."""
    return max(int(math.ceil(_check_delta(delta_q) - 1.0)), 0)


def sparsity_threshold(delta_q: float, q: float) -> float:
    """2^(q/(1-q)) * Delta_q; q = inf gives Delta_q / 2."""
    _exponent(q)
    factor = 0.5 if math.isinf(q) else 2.0 ** (q / (1.0 - q))
    return factor * _check_delta(delta_q)


def alpha_theta(model: PenaltyModel, N: int) -> float:
    """The (1 - 1/N)-quantile of the penalty distribution."""
    if N < 1:
        raise DomainError("N must be at least 1")
    return float(inverse_cdf(model, 1.0 - 1.0 / N))


@dataclass
class SolutionPenaltyCheck:
    value: float
    threshold: float
    holds: bool


def solution_penalty_check(xhat: np.ndarray, model: PenaltyModel, delta_q: float, s: int) -> SolutionPenaltyCheck:
    """Post-hoc check J(xhat) <= ceil(Delta_q - 1) - s on a solver output."""
    value = penalty(model, xhat)
    threshold = float(ceil_term(delta_q) - s)
    return SolutionPenaltyCheck(value=value, threshold=threshold, holds=value <= threshold)


@dataclass
class BoundReport:
    """Error bound ||xhat - x||_q <= bound_value with its applicability verdict."""

    delta_q: float
    q: float
    N: int
    s: int
    penalty: str
    alpha_theta: float
    s_max: float
    bound_value: float
    verdict: BoundVerdict
    reasons: List[str] = field(default_factory=list)
    solution_check: Optional[SolutionPenaltyCheck] = None

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "check": "recovery_bound",
            "delta_q": self.delta_q,
            "q": "inf" if math.isinf(self.q) else self.q,
            "N": self.N,
            "s": self.s,
            "penalty": self.penalty,
            "alpha_theta": self.alpha_theta,
            "s_max": self.s_max,
            "bound_value": self.bound_value,
            "verdict": self.verdict.value,
            "reasons": list(self.reasons),
        }
        if self.solution_check is not None:
            out["solution_penalty"] = self.solution_check.value
            out["solution_penalty_threshold"] = self.solution_check.threshold
        return out


def recovery_bound(
    delta_q: float,
    q: float,
    N: int,
    model: PenaltyModel,
    s: int,
    xhat: Optional[np.ndarray] = None,
) -> BoundReport:
    """
    Evaluate N * alpha / (Delta^(1-1/q) - ceil(Delta - 1)^(1-1/q)).

    The value is always computed; the verdict is INAPPLICABLE when
    s >= 2^(q/(1-q)) * Delta, or when ``xhat`` is given and
    J(xhat) > ceil(Delta - 1) - s. ``reasons`` names each failed condition.

    Raises:
        DegenerateBoundError: the denominator is not positive
    """
    e = _exponent(q)
    delta_q = _check_delta(delta_q)
    if N < 1 or s < 1:
        raise DomainError("N and s must be at least 1")

    denominator = delta_q ** e - float(ceil_term(delta_q)) ** e
    if not denominator > 0:
        raise DegenerateBoundError(
            f"bound denominator {denominator:g} is not positive for delta_q={delta_q}, q={q}"
        )

    alpha = alpha_theta(model, N)
    s_max = sparsity_threshold(delta_q, q)
    report = BoundReport(
        delta_q=delta_q, q=float(q), N=N, s=s, penalty=model.spec,
        alpha_theta=alpha, s_max=s_max, bound_value=N * alpha / denominator,
        verdict=BoundVerdict.APPLICABLE,
    )
    if s >= s_max:
        report.reasons.append(f"sparsity s={s} is not below s_max={s_max:g}")
    if xhat is not None:
        report.solution_check = solution_penalty_check(xhat, model, delta_q, s)
        if not report.solution_check.holds:
            report.reasons.append(
                f"solution penalty {report.solution_check.value:g} exceeds "
                f"ceil(delta_q - 1) - s = {report.solution_check.threshold:g}"
            )
    if report.reasons:
        report.verdict = BoundVerdict.INAPPLICABLE
    logger.debug("recovery_bound", penalty=report.penalty, bound=report.bound_value, verdict=report.verdict.value)
    return report


@dataclass
class BoundSweep:
    penalties: List[str]
    alphas: List[float]
    bounds: List[float]

    @property
    def monotone_decreasing(self) -> bool:
        return all(b <= a for a, b in zip(self.bounds, self.bounds[1:]))


def bound_sweep(delta_q: float, q: float, N: int, models: Sequence[PenaltyModel], s: int) -> BoundSweep:
    """
    Bound values along a sequence of models, e.g. Weibull with shrinking
    sigma; as alpha goes to 0 the bound should fall monotonically to 0.
    """
    reports = [recovery_bound(delta_q, q, N, model, s) for model in models]
    return BoundSweep(
        penalties=[r.penalty for r in reports],
        alphas=[r.alpha_theta for r in reports],
        bounds=[r.bound_value for r in reports],
    )
