"""Exception hierarchy for the sparse recovery toolkit."""

from typing import Optional, Sequence


class SparseRecoveryError(Exception):
    """Base class for all errors raised by the toolkit."""


class DomainError(SparseRecoveryError, ValueError):
    """Argument outside the domain of an operation (negative t, bad parameter, ...)."""


class SingularityError(SparseRecoveryError, ArithmeticError):
    """A reweighting weight diverges at zero and no smoothing was requested."""


class DegenerateScaleError(SparseRecoveryError, ArithmeticError):
    """A normalisation constant vanished (cdf(1) == 0)."""


class DegenerateBoundError(SparseRecoveryError, ArithmeticError):
    """The recovery-bound denominator is not positive."""


class UnsupportedModelError(SparseRecoveryError):
    """The penalty model cannot be used by the requested operation."""


class DimensionMismatchError(SparseRecoveryError, ValueError):
    """Array shapes of a problem do not agree."""


class ExperimentError(SparseRecoveryError):
    """Invalid experiment configuration or aggregation request."""


class PenaltySpecError(SparseRecoveryError, ValueError):
    """Penalty specification text could not be parsed."""

    def __init__(self, text: str, position: int, expected: Sequence[str], detail: Optional[str] = None):
        self.text = text
        self.position = position
        self.expected = tuple(expected)
        self.detail = detail
        message = f"invalid penalty spec {text!r} at position {position}"
        if self.expected:
            message += f": expected {' or '.join(self.expected)}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)
