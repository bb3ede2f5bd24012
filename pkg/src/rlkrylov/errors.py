"""Exception classes."""


class RLinearError(Exception):
    """Base class of all errors raised by :mod:`rlkrylov`."""


class ArgumentError(RLinearError, ValueError):
    """An argument is invalid (wrong shape, out of range, ...)."""


class NumericalError(RLinearError, ArithmeticError):
    """A computation failed numerically: non-convergence, rank deficiency,
    or an assumption that could only be checked during the computation."""


class ConvergenceError(NumericalError):
    """An iteration did not converge within its cap."""


class NotContriangularizableError(NumericalError):
    """``M conj(M)`` has eigenvalues off the nonnegative real axis."""


class DegenerateConeigenvaluesError(NumericalError):
    """Two coneigenvalue moduli coincide to within the gap tolerance."""
