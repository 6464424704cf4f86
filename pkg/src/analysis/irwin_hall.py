"""
Monte Carlo check that J(x) follows the Irwin-Hall law when |x_j| are
drawn i.i.d. from the penalty's own density.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Union

import numpy as np
from scipy import special, stats

from ..errors import DomainError, UnsupportedModelError
from ..penalties import Family, PenaltyModel, cdf, inverse_cdf
from ..utils.logging import get_logger

logger = get_logger(__name__)

CLOSED_FORM_MAX_N = 30
KS_CRITICAL_CONSTANT = 1.36


def irwin_hall_cdf(x: Union[float, np.ndarray], N: int):
    """
    CDF of the sum of N independent U[0, 1] variables.

    For N <= 30 the exact piecewise polynomial is built with the recurrence
    F_n(x) = (x F_{n-1}(x) + (n - x) F_{n-1}(x - 1)) / n, starting from
    F_1(x) = clip(x, 0, 1). It equals the alternating sum
    (1/N!) sum_k (-1)^k C(N, k) (x - k)^N but each step is a convex
    combination and free of cancellation. Larger N use
    the normal limit N(N/2, N/12).
    """
    if N < 1:
        raise DomainError("N must be at least 1")
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)

    if N > CLOSED_FORM_MAX_N:
        out = special.ndtr((arr - N / 2.0) / math.sqrt(N / 12.0))
    else:
        # row j holds F_n(x - j)
        shifted = arr[np.newaxis, ...] - np.arange(N).reshape((N,) + (1,) * arr.ndim)
        values = np.clip(shifted, 0.0, 1.0)
        for n in range(2, N + 1):
            y = shifted[: N - n + 1]
            values = (y * values[: N - n + 1] + (n - y) * values[1 : N - n + 2]) / n
        out = values[0]
        out = np.where(arr <= 0, 0.0, np.where(arr >= N, 1.0, out))
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if scalar else out


@dataclass
class IrwinHallReport:
    penalty: str
    N: int
    samples: int
    seed: int
    mean: float
    variance: float
    ks_distance: float
    ks_pvalue: float

    @property
    def expected_mean(self) -> float:
        return self.N / 2.0

    @property
    def expected_variance(self) -> float:
        return self.N / 12.0

    @property
    def mean_stderr(self) -> float:
        return math.sqrt(self.expected_variance / self.samples)

    @property
    def ks_critical(self) -> float:
        """5% critical value of the one-sample KS statistic."""
        return KS_CRITICAL_CONSTANT / math.sqrt(self.samples)

    @property
    def ks_passes(self) -> bool:
        return self.ks_distance < self.ks_critical

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": "irwin_hall",
            "penalty": self.penalty,
            "N": self.N,
            "samples": self.samples,
            "seed": self.seed,
            "mean": self.mean,
            "expected_mean": self.expected_mean,
            "mean_stderr": self.mean_stderr,
            "variance": self.variance,
            "expected_variance": self.expected_variance,
            "ks_distance": self.ks_distance,
            "ks_critical": self.ks_critical,
            "ks_pvalue": self.ks_pvalue,
            "ks_passes": self.ks_passes,
        }


def irwin_hall_check(model: PenaltyModel, N: int, samples: int, rng_seed: int) -> IrwinHallReport:
    """
    Sample J(x) with |x_j| = F^{-1}(U_j), U_j ~ U[0, 1), and compare it with
    Irwin-Hall(N): empirical mean, variance (ddof=1) and the KS distance.

    Raises:
        UnsupportedModelError: the point mass at 0 (its quantile is constant)
    """
    if model.family is Family.DIRAC_DELTA:
        raise UnsupportedModelError("the Irwin-Hall check needs a continuous distribution, not dirac")
    if N < 1 or samples < 2:
        raise DomainError("N must be at least 1 and samples at least 2")

    rng = np.random.default_rng(rng_seed)
    uniforms = rng.random((samples, N))
    magnitudes = inverse_cdf(model, uniforms)
    draws = np.sum(cdf(model, magnitudes), axis=1)

    ks = stats.kstest(draws, lambda t: irwin_hall_cdf(t, N))
    report = IrwinHallReport(
        penalty=model.spec,
        N=N,
        samples=samples,
        seed=rng_seed,
        mean=float(np.mean(draws)),
        variance=float(np.var(draws, ddof=1)),
        ks_distance=float(ks.statistic),
        ks_pvalue=float(ks.pvalue),
    )
    logger.info("irwin_hall_checked", penalty=report.penalty, N=N, samples=samples, ks=report.ks_distance)
    return report
