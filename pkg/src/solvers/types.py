"""Problem, configuration and result types shared by the solvers."""

import enum
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..config import settings
from ..errors import DimensionMismatchError, DomainError


@dataclass(frozen=True)
class MeasurementProblem:
    """
    Linear measurements y = A x of an unknown vector.

    Attributes:
        A: Measurement matrix (m x N)
        y: Observations (length m)
        truth: Ground-truth vector (length N) when known
    """

    A: np.ndarray
    y: np.ndarray
    truth: Optional[np.ndarray] = None

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        y = np.array(self.y, dtype=float).ravel()
        if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
            raise DimensionMismatchError(f"A must be a non-empty matrix, got shape {A.shape}")
        if y.shape[0] != A.shape[0]:
            raise DimensionMismatchError(f"y has length {y.shape[0]} but A has {A.shape[0]} rows")
        if not (np.isfinite(A).all() and np.isfinite(y).all()):
            raise DomainError("A and y must be finite")
        A.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "y", y)

        if self.truth is not None:
            truth = np.array(self.truth, dtype=float).ravel()
            if truth.shape[0] != A.shape[1]:
                raise DimensionMismatchError(f"truth has length {truth.shape[0]} but A has {A.shape[1]} columns")
            if not np.isfinite(truth).all():
                raise DomainError("truth must be finite")
            truth.setflags(write=False)
            object.__setattr__(self, "truth", truth)

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def N(self) -> int:
        return self.A.shape[1]

    def residual(self, x: np.ndarray) -> np.ndarray:
        return self.y - self.A @ x

    def rel_error(self, x: np.ndarray) -> Optional[float]:
        """||x - truth|| / ||truth||, or the absolute error when truth is 0."""
        if self.truth is None:
            return None
        scale = np.linalg.norm(self.truth)
        err = np.linalg.norm(np.asarray(x, dtype=float) - self.truth)
        return float(err / scale) if scale > 0 else float(err)


class AdmmConfig(BaseModel):
    """ADMM parameters for the weighted-lasso subproblem."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rho: float = Field(default=1.0, gt=0)
    max_iter: int = Field(default=2000, ge=1)
    tol_primal: float = Field(default=1e-8, gt=0)
    tol_dual: float = Field(default=1e-8, gt=0)
    tol_rel: float = Field(default=1e-8, ge=0)
    # over-relaxation factor, 1 disables it
    alpha: float = Field(default=1.6, gt=0, lt=2)
    # rho applies to the problem normalised by lambda * max(w)
    relative_rho: bool = True

    @classmethod
    def from_settings(cls, **overrides: Any) -> "AdmmConfig":
        values = dict(
            rho=settings.admm_rho,
            max_iter=settings.admm_max_iter,
            tol_primal=settings.admm_tol_primal,
            tol_dual=settings.admm_tol_dual,
            tol_rel=settings.admm_tol_rel,
            alpha=settings.admm_alpha,
            relative_rho=settings.admm_relative_rho,
        )
        values.update(overrides)
        return cls(**values)

    def effective_rho(self, lam: float, weights: Optional[np.ndarray] = None) -> float:
        """
        Penalty c of the augmented Lagrangian.

        With ``relative_rho`` the penalty is rho * lam * max(w), which keeps
        the largest soft threshold lam * max(w) / c at 1 / rho whatever the
        scale of lambda or of the weights. All-zero weights count as 1.
        """
        if not self.relative_rho:
            return self.rho
        top = float(np.max(weights)) if weights is not None and len(weights) else 1.0
        return self.rho * lam * (top if top > 0 else 1.0)


class Irl1Config(BaseModel):
    """Outer-loop parameters of iteratively reweighted l1."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    lam: float = Field(gt=0, alias="lambda")
    max_outer: int = Field(default=20, ge=1)
    eps: float = Field(default=1e-8, ge=0)
    stop_tol: float = Field(default=1e-6, gt=0)

    @classmethod
    def from_settings(cls, lam: float, **overrides: Any) -> "Irl1Config":
        values = dict(
            lam=lam,
            max_outer=settings.irl1_max_outer,
            eps=settings.irl1_eps,
            stop_tol=settings.irl1_stop_tol,
        )
        values.update(overrides)
        return cls(**values)


class StopReason(enum.Enum):
    CONVERGED = "converged"
    MAX_ITER = "max_iter"
    MAX_OUTER = "max_outer"
    # IRL1 rejected an outer step that raised the objective
    ASCENT = "ascent"


@dataclass
class SolveResult:
    """
    Outcome of a solver run.

    ``converged`` holds exactly when ``stop_reason`` is CONVERGED; the
    residuals then lie within ``primal_tolerance`` and ``dual_tolerance``,
    the thresholds the stopping test used on its last check.
    """

    xhat: np.ndarray
    outer_iters: int
    total_inner_iters: int
    objective_trace: np.ndarray
    stop_reason: StopReason
    solver: str = "admm"
    primal_residual: float = float("nan")
    dual_residual: float = float("nan")
    primal_tolerance: float = float("nan")
    dual_tolerance: float = float("nan")
    rho: float = float("nan")
    rel_error: Optional[float] = None
    dual: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def converged(self) -> bool:
        return self.stop_reason is StopReason.CONVERGED

    @property
    def objective(self) -> float:
        return float(self.objective_trace[-1]) if len(self.objective_trace) else float("nan")

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready representation (the scaled dual is omitted)."""
        return {
            "solver": self.solver,
            "converged": self.converged,
            "stop_reason": self.stop_reason.value,
            "outer_iters": self.outer_iters,
            "total_inner_iters": self.total_inner_iters,
            "objective": self.objective,
            "objective_trace": [float(v) for v in self.objective_trace],
            "primal_residual": float(self.primal_residual),
            "dual_residual": float(self.dual_residual),
            "primal_tolerance": float(self.primal_tolerance),
            "dual_tolerance": float(self.dual_tolerance),
            "rho": float(self.rho),
            "rel_error": self.rel_error,
            "xhat": [float(v) for v in self.xhat],
        }
