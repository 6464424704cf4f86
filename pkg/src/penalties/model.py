"""CDF-induced penalties J(x) = sum_j F(|x_j|) and the per-model evaluation operations."""

from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Tuple, Union

import numpy as np

from ..config import settings
from ..errors import DegenerateScaleError, DomainError, SingularityError, UnsupportedModelError
from .distributions import BaseDistribution, Concavity, DistributionFactory, Family

ArrayLike = Union[float, np.ndarray, list, tuple]


@dataclass(frozen=True, eq=True)
class PenaltyModel:
    """
    A distribution family plus its parameter vector.

    Models are validated at construction and immutable afterwards, so one
    instance can be shared between solvers, worker processes and threads.
    ``params`` holds every parameter, defaults included.
    """

    family: Family
    params: Mapping[str, float] = field(default_factory=dict)
    _dist: BaseDistribution = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.family, Family):
            raise DomainError(f"family must be a Family member, got {self.family!r}")
        dist = DistributionFactory.create(self.family, dict(self.params))
        object.__setattr__(self, "params", dict(dist.params))
        object.__setattr__(self, "_dist", dist)

    def __hash__(self) -> int:
        return hash((self.family, tuple(sorted(self.params.items()))))

    def __reduce__(self) -> Tuple[Any, ...]:
        return (PenaltyModel, (self.family, dict(self.params)))

    @classmethod
    def create(cls, family: Union[Family, str], **params: float) -> "PenaltyModel":
        """Build a model from a family member or any accepted family name/alias."""
        if isinstance(family, str):
            from .spec_parser import resolve_family
            family = resolve_family(family)
        return cls(family, params)

    @classmethod
    def from_spec(cls, text: str) -> "PenaltyModel":
        """Parse ``family(name=value,...)`` text, e.g. ``weibull(k=0.5,sigma=1)``."""
        from .spec_parser import parse_penalty_spec
        return parse_penalty_spec(text)

    @property
    def spec(self) -> str:
        """Canonical specification text for this model."""
        from .spec_parser import format_penalty_spec
        return format_penalty_spec(self)

    @property
    def concavity(self) -> Concavity:
        return self._dist.concavity

    @property
    def is_concave(self) -> bool:
        return self._dist.concavity is Concavity.CONCAVE

    @property
    def has_density(self) -> bool:
        return self._dist.has_density

    @property
    def diverges_at_zero(self) -> bool:
        return self._dist.diverges_at_zero

    @property
    def distribution(self) -> BaseDistribution:
        return self._dist

    def pdf(self, t: ArrayLike):
        return pdf(self, t)

    def cdf(self, t: ArrayLike):
        return cdf(self, t)

    def inverse_cdf(self, prob: ArrayLike):
        return inverse_cdf(self, prob)

    def penalty(self, x: ArrayLike) -> float:
        return penalty(self, x)

    def __str__(self) -> str:
        return self.spec


def _as_array(value: ArrayLike, name: str) -> Tuple[np.ndarray, bool]:
    arr = np.asarray(value, dtype=float)
    if np.isnan(arr).any():
        raise DomainError(f"{name} contains NaN")
    return arr, arr.ndim == 0


def _as_nonnegative(value: ArrayLike, name: str) -> Tuple[np.ndarray, bool]:
    arr, scalar = _as_array(value, name)
    if (arr < 0).any():
        raise DomainError(f"{name} must be nonnegative")
    return np.atleast_1d(arr), scalar


def _unwrap(out: np.ndarray, scalar: bool):
    return float(out[0]) if scalar else out


def pdf(model: PenaltyModel, t: ArrayLike):
    """Density f(t) for t >= 0 (0 outside bounded supports, inf where it diverges)."""
    arr, scalar = _as_nonnegative(t, "t")
    if not model.has_density:
        raise UnsupportedModelError(f"{model.family.value} has no density")
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        out = model.distribution._pdf(arr)
    return _unwrap(out, scalar)


def cdf(model: PenaltyModel, t: ArrayLike):
    """Distribution function F(t) in [0, 1] for t >= 0."""
    arr, scalar = _as_nonnegative(t, "t")
    with np.errstate(over="ignore", under="ignore"):
        out = model.distribution._cdf(arr)
    return _unwrap(np.clip(out, 0.0, 1.0), scalar)


def inverse_cdf(model: PenaltyModel, prob: ArrayLike):
    """Quantile F^{-1}(prob) for prob in [0, 1)."""
    arr, scalar = _as_array(prob, "prob")
    if ((arr < 0) | (arr >= 1)).any():
        raise DomainError("prob must lie in [0, 1)")
    out = model.distribution._quantile(np.atleast_1d(arr))
    return _unwrap(np.maximum(out, 0.0), scalar)


def cdf_by_quadrature(model: PenaltyModel, t: ArrayLike):
    """F(t) computed by adaptive quadrature of the density, independent of any closed form."""
    arr, scalar = _as_nonnegative(t, "t")
    return _unwrap(model.distribution.quadrature_cdf(arr), scalar)


def quantile_by_bisection(model: PenaltyModel, prob: ArrayLike):
    """F^{-1}(prob) computed by bracketed root finding on the CDF."""
    arr, scalar = _as_array(prob, "prob")
    if ((arr < 0) | (arr >= 1)).any():
        raise DomainError("prob must lie in [0, 1)")
    return _unwrap(model.distribution.bisection_quantile(np.atleast_1d(arr)), scalar)


def penalty(model: PenaltyModel, x: ArrayLike) -> float:
    """J(x) = sum_j F(|x_j|); lies in [0, ||x||_0]."""
    arr = np.asarray(x, dtype=float)
    if not np.isfinite(arr).all():
        raise DomainError("penalty argument must be finite")
    if model.family is Family.DIRAC_DELTA:
        return float(np.count_nonzero(arr))
    return float(np.sum(cdf(model, np.abs(arr.ravel()))))


def irl1_weight(model: PenaltyModel, t: ArrayLike, eps: Optional[float] = None):
    """
    Reweighting weight f(t + eps), the derivative of F at the current magnitude.

    Args:
        model: Penalty model with a density
        t: Current magnitudes |x_j| (scalar or array)
        eps: Additive smoothing; defaults to ``settings.irl1_eps``

    Raises:
        SingularityError: eps == 0, the density diverges at 0 and some t == 0
    """
    eps = settings.irl1_eps if eps is None else float(eps)
    if not np.isfinite(eps) or eps < 0:
        raise DomainError("eps must be a finite nonnegative number")
    arr, scalar = _as_nonnegative(t, "t")
    if not model.has_density:
        raise UnsupportedModelError(f"{model.family.value} has no density, so no reweighting weights")
    if eps == 0 and model.diverges_at_zero and (arr == 0).any():
        raise SingularityError(
            f"{model.spec}: weight diverges at t=0; use eps > 0 to smooth the reweighting"
        )
    return _unwrap(pdf(model, arr + eps), scalar)


def scaled_penalty_curve(model: PenaltyModel, grid: ArrayLike) -> np.ndarray:
    """F(t)/F(1) over a grid of t >= 0, so every curve passes through (1, 1)."""
    arr, _ = _as_nonnegative(grid, "grid")
    at_one = cdf(model, 1.0)
    if at_one <= 0:
        raise DegenerateScaleError(f"{model.spec}: F(1) = 0, cannot normalise the curve")
    return cdf(model, arr) / at_one
