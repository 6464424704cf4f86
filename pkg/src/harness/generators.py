"""Seeded signal, matrix and trial-problem generators."""

from typing import Tuple, Union

import numpy as np

from ..errors import DomainError
from ..solvers import MeasurementProblem
from .config import ExperimentConfig

Seed = Union[int, np.random.SeedSequence]


def trial_seed(master_seed: int, s: int, replicate: int) -> int:
    """
    Stable 64-bit seed for one (sparsity, replicate) cell.

    Derived by hashing the triple through numpy's SeedSequence, so it does
    not depend on the order trials run in or on the penalty being solved.
    """
    if master_seed < 0 or s < 0 or replicate < 0:
        raise DomainError("seed components must be nonnegative")
    state = np.random.SeedSequence([master_seed, s, replicate]).generate_state(1, np.uint64)
    return int(state[0])


def gen_sparse_signal(N: int, s: int, seed: Seed, law: str = "gaussian") -> np.ndarray:
    """s-sparse vector: support uniform without replacement, nonzeros N(0,1) or +/-1."""
    if N < 1:
        raise DomainError("N must be at least 1")
    if not 0 < s <= N:
        raise DomainError(f"s must lie in [1, N={N}], got {s}")
    rng = np.random.default_rng(seed)
    support = rng.choice(N, size=s, replace=False)
    if law == "gaussian":
        values = rng.standard_normal(s)
    elif law == "rademacher":
        values = rng.choice(np.array([-1.0, 1.0]), size=s)
    else:
        raise DomainError(f"unknown nonzero law {law!r}")
    x = np.zeros(N)
    x[support] = values
    return x


def gen_gaussian_matrix(m: int, N: int, seed: Seed, scaling: str = "inv_m") -> np.ndarray:
    """i.i.d. Gaussian matrix with entry variance 1/m (``inv_m``) or 1 (``unit``)."""
    if m < 1 or N < 1:
        raise DomainError("m and N must be at least 1")
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, N))
    if scaling == "inv_m":
        A /= np.sqrt(m)
    elif scaling != "unit":
        raise DomainError(f"unknown matrix scaling {scaling!r}")
    return A


def compressible_signal(N: int, exponent: float) -> np.ndarray:
    """Entries j^(-exponent) for j = 1..N."""
    if N < 1:
        raise DomainError("N must be at least 1")
    return np.arange(1, N + 1, dtype=float) ** (-float(exponent))


def trial_problem(
    m: int,
    N: int,
    s: int,
    seed: int,
    law: str = "gaussian",
    scaling: str = "inv_m",
) -> MeasurementProblem:
    """Noiseless problem y = A x for one trial; A and x use independent child streams of ``seed``."""
    matrix_seq, signal_seq = np.random.SeedSequence(seed).spawn(2)
    A = gen_gaussian_matrix(m, N, matrix_seq, scaling)
    x = gen_sparse_signal(N, s, signal_seq, law)
    return MeasurementProblem(A=A, y=A @ x, truth=x)


def cell_problem(cfg: ExperimentConfig, s: int, replicate: int) -> Tuple[int, MeasurementProblem]:
    """Seed and problem shared by every penalty in the (s, replicate) cell of a sweep."""
    seed = trial_seed(cfg.master_seed, s, replicate)
    return seed, trial_problem(cfg.m, cfg.N, s, seed, cfg.nonzero_law, cfg.matrix_scaling)
