"""Exception hierarchy shared by every module of the package."""


class OrthoLadderError(Exception):
    """Base class for all package errors."""


class DomainError(OrthoLadderError, ValueError):
    """An argument lies outside the declared domain of an operation."""


class UnsupportedFamilyError(DomainError):
    """The requested operation has no meaning for this system family."""


class OutOfRangeError(OrthoLadderError, OverflowError):
    """A result is not representable as a finite double."""


class EvaluationError(OrthoLadderError, ArithmeticError):
    """A numerical evaluation failed to reach its tolerance.

    ``diagnostics`` carries whatever partial state the evaluator had
    (partial sums, term counts, residuals) at the point of failure.
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class ConvergenceError(EvaluationError):
    """Step refinement of an integrator exhausted its step budget."""


class TruncationWarning(UserWarning):
    """An open ladder was cut where the top level still holds population."""
