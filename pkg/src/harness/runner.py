"""Replicated recovery trials over (penalty, sparsity, replicate) grids."""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from scipy.stats import fisher_exact

from ..errors import ExperimentError, SparseRecoveryError
from ..solvers import irl1, solve_l1
from ..utils.logging import get_logger, log_trial
from .config import ExperimentConfig, canonical_penalty
from .generators import cell_problem

logger = get_logger(__name__)


@dataclass
class TrialRecord:
    """One replicate's outcome; ``success`` iff rel_error <= success_tol."""

    penalty: str
    s: int
    replicate: int
    seed: int
    rel_error: float
    success: bool
    outer_iters: int
    wall_time: float
    converged: Optional[bool] = None


@dataclass
class SuccessCell:
    penalty: str
    s: int
    successes: int
    trials: int

    @property
    def rate(self) -> float:
        return self.successes / self.trials


def _run_cell(cfg: ExperimentConfig, s: int, replicate: int) -> List[TrialRecord]:
    """Solve one shared (A, x, y) with every configured penalty."""
    seed, problem = cell_problem(cfg, s, replicate)
    irl1_cfg = cfg.irl1_config()
    records = []
    for spec in cfg.penalties:
        started = time.perf_counter()
        try:
            model = cfg.penalty_model(spec)
            if model is None:
                result = solve_l1(problem, cfg.lam, cfg.admm)
            else:
                result = irl1(problem, model, irl1_cfg, cfg.admm)
            rel_error, outer, converged = result.rel_error, result.outer_iters, result.converged
        except SparseRecoveryError as exc:
            logger.error("trial_failed", penalty=spec, s=s, replicate=replicate, error=str(exc))
            rel_error, outer, converged = float("inf"), 0, False
        elapsed = time.perf_counter() - started

        record = TrialRecord(
            penalty=spec,
            s=s,
            replicate=replicate,
            seed=seed,
            rel_error=float(rel_error),
            success=bool(rel_error <= cfg.success_tol),
            outer_iters=outer,
            wall_time=elapsed if cfg.record_wall_time else 0.0,
            converged=converged,
        )
        log_trial(logger, spec, s, replicate, record.rel_error, record.success, converged=converged)
        records.append(record)
    return records


def _run_cell_packed(args: Tuple[ExperimentConfig, int, int]) -> List[TrialRecord]:
    return _run_cell(*args)


def sort_records(records: Iterable[TrialRecord], penalties: Sequence[str]) -> List[TrialRecord]:
    """Canonical order: configured penalty order, then s, then replicate."""
    rank = {spec: i for i, spec in enumerate(penalties)}
    return sorted(records, key=lambda r: (rank.get(r.penalty, len(rank)), r.penalty, r.s, r.replicate))


def run_sweep(
    cfg: ExperimentConfig,
    progress: Optional[Callable[[int], None]] = None,
) -> List[TrialRecord]:
    """
    Run every (penalty, s, replicate) trial of the config.

    All penalties in a (s, replicate) cell share one problem. Cells run in
    ``cfg.workers`` processes when more than one is configured; the output
    order is canonical either way. ``progress`` is called with the number of
    records each finished cell produced.
    """
    cells = [(cfg, s, rep) for s in cfg.sorted_sparsity for rep in range(cfg.replicates)]
    logger.info(
        "sweep_started",
        penalties=len(cfg.penalties),
        sparsity_levels=len(cfg.sparsity_grid),
        replicates=cfg.replicates,
        workers=cfg.workers,
    )
    started = time.perf_counter()

    records: List[TrialRecord] = []
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for batch in pool.map(_run_cell_packed, cells, chunksize=max(1, len(cells) // (4 * cfg.workers))):
                records.extend(batch)
                if progress:
                    progress(len(batch))
    else:
        for cell in cells:
            batch = _run_cell_packed(cell)
            records.extend(batch)
            if progress:
                progress(len(batch))

    records = sort_records(records, cfg.penalties)
    logger.info(
        "sweep_finished",
        records=len(records),
        successes=sum(r.success for r in records),
        duration_s=round(time.perf_counter() - started, 3),
    )
    return records


def _matching(records: Iterable[TrialRecord], penalty_spec: str, s: int) -> List[TrialRecord]:
    try:
        target = canonical_penalty(penalty_spec)
    except SparseRecoveryError:
        target = penalty_spec
    return [r for r in records if r.s == s and r.penalty in (target, penalty_spec)]


def success_rate(records: Sequence[TrialRecord], penalty_spec: str, s: int) -> float:
    """Fraction of successful trials for one (penalty, s) cell."""
    matching = _matching(records, penalty_spec, s)
    if not matching:
        raise ExperimentError(f"no trials recorded for penalty {penalty_spec!r} at s={s}")
    return sum(r.success for r in matching) / len(matching)


def aggregate_success(records: Sequence[TrialRecord]) -> List[SuccessCell]:
    """Success counts per (penalty, s), penalties in first-seen order and s ascending."""
    order: Dict[str, int] = {}
    cells: Dict[Tuple[str, int], SuccessCell] = {}
    for record in records:
        order.setdefault(record.penalty, len(order))
        cell = cells.setdefault((record.penalty, record.s), SuccessCell(record.penalty, record.s, 0, 0))
        cell.trials += 1
        cell.successes += int(record.success)
    return sorted(cells.values(), key=lambda c: (order[c.penalty], c.s))


def success_monotonicity_holds(
    records: Sequence[TrialRecord],
    penalty_spec: str,
    s_low: int,
    s_high: int,
    confidence: float = 0.99,
) -> bool:
    """
    Whether rate(s_low) >= rate(s_high) is consistent with the counts.

    One-sided Fisher exact test of "the sparser level succeeds less often";
    monotonicity fails only when that is significant at 1 - confidence.
    """
    low = _matching(records, penalty_spec, s_low)
    high = _matching(records, penalty_spec, s_high)
    if not low or not high:
        raise ExperimentError(f"no trials recorded for penalty {penalty_spec!r} at s={s_low} or s={s_high}")
    low_ok = sum(r.success for r in low)
    high_ok = sum(r.success for r in high)
    table = [[low_ok, len(low) - low_ok], [high_ok, len(high) - high_ok]]
    _, pvalue = fisher_exact(table, alternative="less")
    return bool(pvalue >= 1.0 - confidence)
