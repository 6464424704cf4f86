"""
ADMM for the weighted lasso

    minimize 1/2 ||y - A x||^2 + lam * sum_j w_j |x_j|

using the splitting x = z with scaled dual u.
"""

import time
from typing import Optional, Union

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from ..errors import DimensionMismatchError, DomainError
from ..penalties import PenaltyModel, penalty
from ..utils.logging import get_logger, log_solver_run
from .types import AdmmConfig, MeasurementProblem, SolveResult, StopReason

logger = get_logger(__name__)


def soft_threshold(v: Union[float, np.ndarray], tau: Union[float, np.ndarray]):
    """sign(v) * max(|v| - tau, 0), elementwise; scalars in, float out."""
    tau_arr = np.asarray(tau, dtype=float)
    if (tau_arr < 0).any():
        raise DomainError("threshold tau must be nonnegative")
    v_arr = np.asarray(v, dtype=float)
    out = np.sign(v_arr) * np.maximum(np.abs(v_arr) - tau_arr, 0.0)
    return float(out) if out.ndim == 0 else out


def weighted_lasso_objective(problem: MeasurementProblem, weights: np.ndarray, lam: float, x: np.ndarray) -> float:
    r = problem.residual(x)
    return float(0.5 * r @ r + lam * np.sum(weights * np.abs(x)))


def objective(problem: MeasurementProblem, model: PenaltyModel, lam: float, x: np.ndarray) -> float:
    """1/2 ||y - A x||^2 + lam * J(x), the objective IRL1 descends."""
    r = problem.residual(x)
    return float(0.5 * r @ r + lam * penalty(model, x))


class AdmmSystem:
    """
    Cached factorization for the ADMM x-update

        (A^T A + c I) x = A^T y + c v.

    Wide matrices (m < N) factor the m x m matrix A A^T + c I and apply
    x = v + A^T (A A^T + c I)^{-1} (y - A v); tall ones factor A^T A + c I.
    The factor depends only on A and c; IRL1 refactors once per outer
    iteration because c follows the largest weight.
    """

    def __init__(self, A: np.ndarray, c: float):
        if not c > 0:
            raise DomainError("ADMM penalty parameter must be positive")
        self.A = A
        self.c = float(c)
        m, n = A.shape
        self.wide = m < n
        if self.wide:
            gram = A @ A.T
        else:
            gram = A.T @ A
        gram[np.diag_indices_from(gram)] += self.c
        self.factor = cho_factor(gram, lower=True, check_finite=False)

    def solve(self, y: np.ndarray, v: np.ndarray, Aty: Optional[np.ndarray] = None) -> np.ndarray:
        if self.wide:
            return v + self.A.T @ cho_solve(self.factor, y - self.A @ v, check_finite=False)
        if Aty is None:
            Aty = self.A.T @ y
        return cho_solve(self.factor, Aty + self.c * v, check_finite=False)


def rescale_dual(u: np.ndarray, tau_old: np.ndarray, tau_new: np.ndarray) -> np.ndarray:
    """
    Carry a scaled dual over to new soft thresholds.

    At a solution |u_j| <= tau_j, with equality on the support, so each
    entry is stretched by tau_new / tau_old and clipped into [-tau_new, tau_new].
    Entries whose old threshold was 0 restart at 0.
    """
    ratio = np.divide(tau_new, tau_old, out=np.zeros_like(tau_new, dtype=float), where=tau_old > 0)
    return np.clip(u * ratio, -tau_new, tau_new)


def solve_weighted_lasso(
    problem: MeasurementProblem,
    weights: np.ndarray,
    lam: float,
    cfg: Optional[AdmmConfig] = None,
    x0: Optional[np.ndarray] = None,
    u0: Optional[np.ndarray] = None,
    system: Optional[AdmmSystem] = None,
) -> SolveResult:
    """
    Solve the weighted lasso by ADMM.

    The stopping test is scale aware: the primal residual ||x - z|| must
    fall below sqrt(N) tol_primal + tol_rel max(||x||, ||z||) and the dual
    residual c ||z - z_prev|| below c (sqrt(N) tol_dual + tol_rel ||u||),
    where c is the penalty from ``cfg.effective_rho(lam, weights)``.

    Args:
        problem: Measurement problem
        weights: Nonnegative weights (length N)
        lam: Regularization strength
        cfg: ADMM parameters, defaults from settings
        x0: Warm start for z
        u0: Warm start for the scaled dual, already matched to these weights
        system: Precomputed factorization for the same penalty c

    Returns:
        SolveResult with ``xhat`` = z (exact zeros off the support). Hitting
        ``max_iter`` gives stop reason MAX_ITER; it is not an error.
    """
    cfg = cfg or AdmmConfig.from_settings()
    n = problem.N
    w = np.asarray(weights, dtype=float).ravel()
    if w.shape[0] != n:
        raise DimensionMismatchError(f"weights have length {w.shape[0]}, expected {n}")
    if not np.isfinite(w).all() or (w < 0).any():
        raise DomainError("weights must be finite and nonnegative")
    if not np.isfinite(lam) or lam <= 0:
        raise DomainError("lambda must be a positive finite number")

    c = cfg.effective_rho(lam, w)
    if system is None:
        system = AdmmSystem(problem.A, c)
    elif system.c != c or system.A.shape != problem.A.shape:
        raise DimensionMismatchError("cached ADMM system does not match this problem")

    z = np.zeros(n) if x0 is None else np.array(x0, dtype=float).ravel()
    u = np.zeros(n) if u0 is None else np.array(u0, dtype=float).ravel()
    if z.shape[0] != n or u.shape[0] != n:
        raise DimensionMismatchError("warm start has the wrong length")

    Aty = None if system.wide else problem.A.T @ problem.y
    tau = lam * w / c
    floor = np.sqrt(n)
    trace = np.empty(cfg.max_iter)
    r_norm = s_norm = eps_pri = eps_dual = float("inf")
    stop = StopReason.MAX_ITER
    started = time.perf_counter()

    it = 0
    for it in range(1, cfg.max_iter + 1):
        x = system.solve(problem.y, z - u, Aty)
        z_old = z
        x_hat = cfg.alpha * x + (1.0 - cfg.alpha) * z_old
        z = soft_threshold(x_hat + u, tau)
        u = u + x_hat - z

        r_norm = float(np.linalg.norm(x - z))
        s_norm = float(c * np.linalg.norm(z - z_old))
        eps_pri = floor * cfg.tol_primal + cfg.tol_rel * max(np.linalg.norm(x), np.linalg.norm(z))
        eps_dual = c * (floor * cfg.tol_dual + cfg.tol_rel * np.linalg.norm(u))
        trace[it - 1] = weighted_lasso_objective(problem, w, lam, z)
        if r_norm <= eps_pri and s_norm <= eps_dual:
            stop = StopReason.CONVERGED
            break

    trace = trace[:it]
    log_solver_run(
        logger, "admm", it, stop is StopReason.CONVERGED, float(trace[-1]),
        duration_ms=(time.perf_counter() - started) * 1000,
        primal_residual=r_norm, dual_residual=s_norm, rho=c,
    )
    return SolveResult(
        xhat=z,
        outer_iters=1,
        total_inner_iters=it,
        objective_trace=trace,
        stop_reason=stop,
        solver="admm",
        primal_residual=r_norm,
        dual_residual=s_norm,
        primal_tolerance=float(eps_pri),
        dual_tolerance=float(eps_dual),
        rho=c,
        rel_error=problem.rel_error(z),
        dual=u,
    )


def solve_l1(problem: MeasurementProblem, lam: float, cfg: Optional[AdmmConfig] = None) -> SolveResult:
    """Plain lasso: the weighted lasso with unit weights."""
    result = solve_weighted_lasso(problem, np.ones(problem.N), lam, cfg)
    result.solver = "l1"
    return result
