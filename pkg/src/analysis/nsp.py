"""Sampling falsifier for the generalized null space property J(v_S) < J(v_Sc)."""

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..errors import DomainError
from ..penalties import PenaltyModel, cdf, penalty
from ..utils.logging import get_logger
from .kernel import kernel_basis

logger = get_logger(__name__)

FALSIFY_TOL = 1e-12
MAX_ENUMERATION = 1_000_000


class GnspOutcome(enum.Enum):
    FALSIFIED = "FALSIFIED"
    # evidence only: no sampled kernel vector violated the property
    NOT_FALSIFIED = "NOT_FALSIFIED"


@dataclass
class GnspVerdict:
    """Result of a falsification run with its provenance."""

    outcome: GnspOutcome
    s: int
    penalty: str
    budget: int
    seed: int
    kernel_dim: int
    samples_checked: int
    min_margin: float = math.inf
    witness: Optional[np.ndarray] = field(default=None, repr=False)
    support: Tuple[int, ...] = ()

    @property
    def falsified(self) -> bool:
        return self.outcome is GnspOutcome.FALSIFIED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": "gnsp",
            "verdict": self.outcome.value,
            "certificate": False,
            "s": self.s,
            "penalty": self.penalty,
            "budget": self.budget,
            "seed": self.seed,
            "kernel_dim": self.kernel_dim,
            "samples_checked": self.samples_checked,
            "min_margin": None if math.isinf(self.min_margin) else self.min_margin,
            "witness": None if self.witness is None else [float(v) for v in self.witness],
            "support": list(self.support),
        }


def worst_case_support(v: np.ndarray, s: int) -> Tuple[int, ...]:
    """Indices of the s largest |v_j| (ties broken by index), in ascending order."""
    v = np.asarray(v, dtype=float).ravel()
    if not 1 <= s <= v.shape[0]:
        raise DomainError(f"s must lie in [1, {v.shape[0]}], got {s}")
    order = np.argsort(-np.abs(v), kind="stable")
    return tuple(sorted(int(i) for i in order[:s]))


def exhaustive_worst_support(v: np.ndarray, s: int, model: PenaltyModel) -> Tuple[Tuple[int, ...], float]:
    """
    Enumerate every support of size s and return the one maximizing J(v_S)
    together with that value. Only for small N.
    """
    v = np.asarray(v, dtype=float).ravel()
    n = v.shape[0]
    if not 1 <= s <= n:
        raise DomainError(f"s must lie in [1, {n}], got {s}")
    if math.comb(n, s) > MAX_ENUMERATION:
        raise DomainError(f"C({n}, {s}) supports is too many to enumerate")
    best: Tuple[Tuple[int, ...], float] = ((), -math.inf)
    for support in itertools.combinations(range(n), s):
        value = penalty(model, v[list(support)])
        if value > best[1]:
            best = (support, value)
    return best


def gnsp_falsify(
    A: np.ndarray,
    s: int,
    model: PenaltyModel,
    budget: int,
    rng_seed: int,
    tol: float = FALSIFY_TOL,
) -> GnspVerdict:
    """
    Search Ker(A) for a vector with J(v_S) >= J(v_Sc) for some |S| = s.

    ``budget`` kernel vectors are drawn uniformly on the unit sphere of kernel
    coordinates, and the +/- basis vectors are added. For each one S is the
    set of its s largest magnitudes, the worst case for a monotone penalty.
    NOT_FALSIFIED means no sample violated the property; it is not a proof.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[1]
    if not 1 <= s <= n:
        raise DomainError(f"s must lie in [1, {n}], got {s}")
    if budget < 1:
        raise DomainError("budget must be at least 1")

    kernel = kernel_basis(A)
    verdict = GnspVerdict(
        outcome=GnspOutcome.NOT_FALSIFIED, s=s, penalty=model.spec, budget=budget,
        seed=rng_seed, kernel_dim=kernel.dim, samples_checked=0,
    )
    if kernel.is_empty:
        logger.info("gnsp_checked", outcome=verdict.outcome.value, kernel_dim=0)
        return verdict

    rng = np.random.default_rng(rng_seed)
    coords = rng.standard_normal((kernel.dim, budget))
    coords /= np.linalg.norm(coords, axis=0, keepdims=True)
    eye = np.eye(kernel.dim)
    coords = np.hstack([coords, eye, -eye])
    vectors = kernel.vector(coords)

    values = cdf(model, np.abs(vectors))
    ranked = -np.sort(-values, axis=0)
    margins = ranked[s:].sum(axis=0) - ranked[:s].sum(axis=0)

    worst = int(np.argmin(margins))
    verdict.samples_checked = vectors.shape[1]
    verdict.min_margin = float(margins[worst])
    if margins[worst] <= tol:
        verdict.outcome = GnspOutcome.FALSIFIED
        verdict.witness = vectors[:, worst].copy()
        verdict.support = worst_case_support(verdict.witness, s)

    logger.info(
        "gnsp_checked",
        outcome=verdict.outcome.value,
        kernel_dim=kernel.dim,
        samples=verdict.samples_checked,
        min_margin=verdict.min_margin,
    )
    return verdict
