"""
Exception hierarchy for Theta Complex.

Input errors map to CLI exit code 2, computation failures to exit code 1.
"""


class ThetaComplexError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = 1


class ComplexError(ThetaComplexError):
    """Malformed complex data: bad faces, vertices out of range, wrong dimension."""

    exit_code = 2


class PreconditionError(ThetaComplexError):
    """An operation was called outside of its mathematical domain."""

    exit_code = 2


class ConfigurationError(ThetaComplexError):
    """Invalid configuration value."""

    exit_code = 2


class LinAlgError(ThetaComplexError):
    """Failure inside the dense linear algebra layer."""


class DimensionMismatchError(LinAlgError):
    """Operands have incompatible shapes."""

    exit_code = 2


class NotSymmetricError(LinAlgError):
    """A matrix that must be symmetric is not."""

    exit_code = 2


class NotPositiveDefiniteError(LinAlgError):
    """A system matrix that must be positive definite is not."""


class SolverError(ThetaComplexError):
    """The SDP solver could not produce a usable answer."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SolverDidNotConvergeError(SolverError):
    """Raised when a caller requires convergence and the solver stopped early."""


class InfeasibleCertificateError(ThetaComplexError):
    """A dual certificate violates one of its linear conditions."""

    exit_code = 2

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class SearchBudgetExceeded(ThetaComplexError):
    """An exact combinatorial search ran out of its node budget."""

    def __init__(self, message, nodes=0):
        super().__init__(message)
        self.nodes = nodes
