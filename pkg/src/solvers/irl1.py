"""Iteratively reweighted l1 (majorize-minimize) for 1/2 ||y - A x||^2 + lam * J(x)."""

import time
from typing import Optional

import numpy as np

from ..errors import UnsupportedModelError
from ..penalties import PenaltyModel, irl1_weight
from ..utils.logging import get_logger, log_solver_run
from .admm import AdmmSystem, objective, rescale_dual, solve_weighted_lasso
from .types import AdmmConfig, Irl1Config, MeasurementProblem, SolveResult, StopReason

logger = get_logger(__name__)

# absolute rise of the objective tolerated between accepted outer steps
ASCENT_SLACK = 1e-9


def check_irl1_model(model: PenaltyModel):
    """Raise UnsupportedModelError unless the model can drive IRL1."""
    if not model.has_density:
        raise UnsupportedModelError(
            f"{model.spec} has no density, so it yields no reweighting weights; IRL1 cannot use it"
        )
    if not model.is_concave:
        raise UnsupportedModelError(
            f"{model.spec} induces a non-concave penalty; IRL1 requires a concave CDF "
            "(Weibull needs k <= 1). Non-concave models need DCA or iteratively reweighted "
            "tight convex solvers, which are not implemented"
        )


def irl1(
    problem: MeasurementProblem,
    model: PenaltyModel,
    cfg: Irl1Config,
    admm: Optional[AdmmConfig] = None,
) -> SolveResult:
    """
    Run iteratively reweighted l1 starting from unit weights.

    Each outer step solves the weighted lasso with w_j = f(|x_j| + eps),
    warm started from the previous iterate with the dual carried over to
    the new thresholds. The run converges when the inner solve converged
    and ||x_new - x|| / max(||x||, 1e-12) <= stop_tol (x = 0 before the
    first step). Otherwise it ends with stop reason MAX_OUTER, or ASCENT
    when a converged outer step raised the objective by more than
    ASCENT_SLACK; that step is discarded and the previous iterate returned.
    An unconverged inner solve that raises the objective ends the run
    with MAX_ITER.

    Raises:
        UnsupportedModelError: Model without a density or with a non-concave CDF
    """
    check_irl1_model(model)
    admm = admm or AdmmConfig.from_settings()
    started = time.perf_counter()

    n = problem.N
    weights = np.ones(n)
    x = np.zeros(n)
    u = np.zeros(n)
    tau = None
    system = None
    trace = []
    inner_total = 0
    stop = StopReason.MAX_OUTER
    last = None
    outer = 0

    for outer in range(1, cfg.max_outer + 1):
        c = admm.effective_rho(cfg.lam, weights)
        if system is None or system.c != c:
            system = AdmmSystem(problem.A, c)
        tau_next = cfg.lam * weights / c
        if tau is not None:
            u = rescale_dual(u, tau, tau_next)
        step = solve_weighted_lasso(problem, weights, cfg.lam, admm, x0=x, u0=u, system=system)
        inner_total += step.total_inner_iters
        value = objective(problem, model, cfg.lam, step.xhat)

        if trace and value > trace[-1] + ASCENT_SLACK:
            stop = StopReason.ASCENT if step.converged else StopReason.MAX_ITER
            logger.debug(
                "irl1_step_rejected", outer=outer, previous=trace[-1], rejected=value,
                inner_converged=step.converged,
            )
            outer -= 1
            break

        trace.append(value)
        change = np.linalg.norm(step.xhat - x) / max(np.linalg.norm(x), 1e-12)
        x, u, tau, last = step.xhat, step.dual, tau_next, step
        if step.converged and change <= cfg.stop_tol:
            stop = StopReason.CONVERGED
            break
        weights = irl1_weight(model, np.abs(x), cfg.eps)

    log_solver_run(
        logger, "irl1", outer, stop is StopReason.CONVERGED, trace[-1],
        duration_ms=(time.perf_counter() - started) * 1000,
        penalty=model.spec, inner_iters=inner_total, stop_reason=stop.value,
    )
    return SolveResult(
        xhat=x,
        outer_iters=outer,
        total_inner_iters=inner_total,
        objective_trace=np.asarray(trace),
        stop_reason=stop,
        solver="irl1",
        primal_residual=last.primal_residual,
        dual_residual=last.dual_residual,
        primal_tolerance=last.primal_tolerance,
        dual_tolerance=last.dual_tolerance,
        rho=last.rho,
        rel_error=problem.rel_error(x),
        dual=last.dual,
    )
