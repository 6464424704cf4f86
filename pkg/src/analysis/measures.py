"""J_theta(x) as a sparsity measure while the distribution parameter varies."""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import DomainError, SparseRecoveryError
from ..penalties import Family, PenaltyModel, penalty, resolve_family
from ..utils.logging import get_logger

logger = get_logger(__name__)


def _identity(theta: float) -> float:
    return theta


def _reciprocal(theta: float) -> float:
    if theta == 0:
        raise DomainError("theta must be nonzero for a reciprocal scale")
    return 1.0 / theta


# family -> (parameter driven by theta, theta -> parameter value)
THETA_AXES: Dict[Family, Tuple[str, Callable[[float], float]]] = {
    Family.EXPONENTIAL: ("sigma", _reciprocal),
    Family.RAYLEIGH: ("sigma", _identity),
    Family.WEIBULL: ("sigma", _identity),
    Family.FOLDED_NORMAL: ("sigma", _identity),
    Family.FOLDED_CAUCHY: ("sigma", _identity),
    Family.UNIFORM: ("gamma", _identity),
    Family.SCAD_LINEAR: ("lam", _identity),
    Family.U_QUADRATIC: ("b", _identity),
    Family.CHI_SQUARED: ("k", _identity),
    Family.GENERALIZED_GAMMA: ("a", _identity),
    Family.GENERALIZED_BETA_PRIME: ("q", _identity),
    Family.FOLDED_STUDENT_T: ("nu", _identity),
}


@dataclass
class SweepPoint:
    theta: float
    value: Optional[float] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class SparsitySweep:
    family: Family
    parameter: str
    points: List[SweepPoint] = field(default_factory=list)

    @property
    def thetas(self) -> np.ndarray:
        return np.array([p.theta for p in self.points], dtype=float)

    @property
    def values(self) -> np.ndarray:
        """J per grid point, NaN where the parameter was invalid."""
        return np.array([p.value if p.ok else np.nan for p in self.points], dtype=float)


def sparsity_sweep(
    model_family: Union[Family, str],
    theta_grid: Sequence[float],
    x: np.ndarray,
    base_params: Optional[Mapping[str, float]] = None,
    theta_param: Optional[str] = None,
) -> SparsitySweep:
    """
    Evaluate J_theta(x) for each theta in the grid.

    By default theta drives the family's scale: Exponential uses sigma = 1/theta,
    Rayleigh and Weibull sigma = theta (Weibull also needs ``k`` in
    ``base_params``). ``theta_param`` sets a parameter to theta directly.
    A grid value that yields an invalid model is recorded with its error
    and the sweep moves on.
    """
    family = resolve_family(model_family) if isinstance(model_family, str) else model_family
    x = np.asarray(x, dtype=float).ravel()
    if not np.isfinite(x).all():
        raise DomainError("x must be finite")

    if theta_param is not None:
        parameter, transform = theta_param, _identity
    elif family in THETA_AXES:
        parameter, transform = THETA_AXES[family]
    else:
        raise DomainError(f"{family.value} has no default theta axis; pass theta_param")

    sweep = SparsitySweep(family=family, parameter=parameter)
    for theta in theta_grid:
        theta = float(theta)
        try:
            params = dict(base_params or {})
            params[parameter] = transform(theta)
            model = PenaltyModel(family, params)
            sweep.points.append(SweepPoint(theta=theta, value=penalty(model, x)))
        except SparseRecoveryError as exc:
            logger.warning("sweep_point_invalid", family=family.value, theta=theta, error=str(exc))
            sweep.points.append(SweepPoint(theta=theta, error=str(exc)))
    return sweep
