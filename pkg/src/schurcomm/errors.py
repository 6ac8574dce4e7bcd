"""Exception types shared across the package."""


class SchurCommError(Exception):
    """Base class for all package errors."""


class InvalidInputError(SchurCommError, ValueError):
    """An argument violates a documented precondition."""


class FunctionDomainError(SchurCommError, ValueError):
    """A scalar function was evaluated outside its declared domain."""


class NumericError(SchurCommError, RuntimeError):
    """An iterative numeric routine failed to converge; message carries diagnostics."""


class NoWitnessError(SchurCommError, ValueError):
    """The multiplier annihilates the supplied witness, so no transfer is possible."""


class DegenerateWitnessError(SchurCommError, ValueError):
    """The candidate matrix is block diagonal with respect to the operator's spectrum."""


class SizeLimitError(SchurCommError, ValueError):
    """A requested construction exceeds the configured dense-size cap."""


class ScheduleInfeasibleError(SchurCommError, ValueError):
    """The growth schedule admits no admissible envelope (log-increment rate >= 1)."""
