"""Orthonormal null-space bases for kernel searches."""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from ..errors import DomainError

KERNEL_RCOND = 1e-10


@dataclass(frozen=True)
class KernelParameterization:
    """
    Orthonormal basis of Ker(A).

    Attributes:
        basis: N x d matrix; kernel vectors are ``basis @ c`` for coordinates c
        source: The matrix the basis was computed from
    """

    basis: np.ndarray
    source: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def N(self) -> int:
        return self.basis.shape[0]

    @property
    def is_empty(self) -> bool:
        return self.dim == 0

    def vector(self, coords: np.ndarray) -> np.ndarray:
        """Map kernel coordinates (d,) or (d, k) to kernel vectors."""
        return self.basis @ np.asarray(coords, dtype=float)

    def residual(self) -> float:
        """Largest column norm of A @ basis."""
        if self.is_empty:
            return 0.0
        return float(np.linalg.norm(self.source @ self.basis, axis=0).max())


def kernel_basis(A: np.ndarray) -> KernelParameterization:
    """
    Null space of A from its SVD, dropping singular values below
    1e-10 times the largest one. Full column rank gives d = 0.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.ndim != 2:
        raise DomainError(f"A must be a matrix, got {A.ndim} dimensions")
    if not np.isfinite(A).all():
        raise DomainError("A must be finite")
    if not np.any(A):
        raise DomainError("A must be nonzero")
    basis = null_space(A, rcond=KERNEL_RCOND)
    return KernelParameterization(basis=basis, source=A)
