"""Spherical-section constant Delta_q(A) = inf over Ker(A) of (||v||_1 / ||v||_q)^(q/(q-1))."""

import enum
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from ..errors import DomainError
from ..utils.logging import get_logger
from .kernel import kernel_basis

logger = get_logger(__name__)

DEFAULT_GRID = 3600
DEFAULT_SAMPLES = 100_000


class DeltaMode(enum.Enum):
    EXACT = "EXACT"                 # d = 1, single kernel ray
    GRID = "GRID"                   # d = 2, refined circle grid
    UPPER_BOUND = "UPPER_BOUND"     # d >= 3, Monte Carlo upper estimate
    EMPTY_KERNEL = "EMPTY_KERNEL"   # d = 0, reported as +inf


@dataclass
class DeltaQEstimate:
    value: float
    mode: DeltaMode
    q: float
    kernel_dim: int
    grid: int
    samples: int = 0
    seed: Optional[int] = None
    minimizer: Optional[np.ndarray] = None

    @property
    def is_upper_bound(self) -> bool:
        return self.mode is DeltaMode.UPPER_BOUND

    def to_dict(self) -> Dict[str, Any]:
        return {
            "delta_q": None if math.isinf(self.value) else self.value,
            "infinite": math.isinf(self.value),
            "mode": self.mode.value,
            "q": "inf" if math.isinf(self.q) else self.q,
            "kernel_dim": self.kernel_dim,
            "grid": self.grid,
            "samples": self.samples,
            "seed": self.seed,
        }


def _check_q(q: float) -> float:
    q = float(q)
    if math.isnan(q) or q <= 1:
        raise DomainError(f"q must lie in (1, inf], got {q}")
    return q


def section_ratio(v: np.ndarray, q: float) -> np.ndarray:
    """
    (||v||_1 / ||v||_q)^(q/(q-1)) per column of v (or for a single vector).
    q = inf uses ||v||_inf and exponent 1.
    """
    q = _check_q(q)
    v = np.asarray(v, dtype=float)
    l1 = np.sum(np.abs(v), axis=0)
    if math.isinf(q):
        return l1 / np.max(np.abs(v), axis=0)
    lq = np.sum(np.abs(v) ** q, axis=0) ** (1.0 / q)
    return (l1 / lq) ** (q / (q - 1.0))


def delta_q(
    A: np.ndarray,
    q: float,
    grid: int = DEFAULT_GRID,
    samples: int = DEFAULT_SAMPLES,
    rng_seed: int = 0,
) -> DeltaQEstimate:
    """
    Estimate Delta_q(A) from an orthonormal kernel basis.

    Kernel dimension 1 is exact. Dimension 2 scans ``grid`` angles of
    [0, pi) (the ratio is even and 0-homogeneous) and refines the best cell
    with a bounded scalar minimization. Dimension 3 and up takes the minimum
    over ``samples`` random kernel directions, an upper estimate.
    """
    q = _check_q(q)
    if grid < 1:
        raise DomainError("grid must be at least 1")
    kernel = kernel_basis(A)
    d = kernel.dim

    if d == 0:
        return DeltaQEstimate(math.inf, DeltaMode.EMPTY_KERNEL, q, 0, grid)

    if d == 1:
        v = kernel.basis[:, 0]
        return DeltaQEstimate(float(section_ratio(v, q)), DeltaMode.EXACT, q, 1, grid, minimizer=v.copy())

    if d == 2:
        b1, b2 = kernel.basis[:, 0], kernel.basis[:, 1]

        def ratio_at(theta: float) -> float:
            return float(section_ratio(math.cos(theta) * b1 + math.sin(theta) * b2, q))

        thetas = np.pi * np.arange(grid) / grid
        values = section_ratio(kernel.vector(np.vstack([np.cos(thetas), np.sin(thetas)])), q)
        best = int(np.argmin(values))
        step = np.pi / grid
        refined = minimize_scalar(
            ratio_at,
            bounds=(thetas[best] - step, thetas[best] + step),
            method="bounded",
            options={"xatol": 1e-12},
        )
        theta = float(thetas[best])
        value = float(values[best])
        if refined.fun < value:
            theta, value = float(refined.x), float(refined.fun)
        minimizer = math.cos(theta) * b1 + math.sin(theta) * b2
        logger.debug("delta_q_grid", q=q, grid=grid, value=value)
        return DeltaQEstimate(value, DeltaMode.GRID, q, 2, grid, minimizer=minimizer)

    if samples < 1:
        raise DomainError("samples must be at least 1")
    rng = np.random.default_rng(rng_seed)
    coords = rng.standard_normal((d, samples))
    values = section_ratio(kernel.vector(coords), q)
    best = int(np.argmin(values))
    logger.info("delta_q_upper_estimate", q=q, kernel_dim=d, samples=samples)
    return DeltaQEstimate(
        float(values[best]), DeltaMode.UPPER_BOUND, q, d, grid,
        samples=samples, seed=rng_seed, minimizer=kernel.vector(coords[:, best]),
    )
