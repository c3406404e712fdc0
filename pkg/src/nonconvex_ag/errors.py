"""Exception hierarchy.

Argument and domain problems derive from ``ValueError``; numerical failures
derive from ``FloatingPointError``. The CLI maps the former to exit code 2
and the latter to exit code 3.
"""


class ParameterError(ValueError):
    """A parameter lies outside its admissible domain."""


class DimensionMismatchError(ValueError):
    """Array shapes do not agree."""


class DegenerateColumnError(ValueError):
    """A design column has zero sample variance."""

    def __init__(self, column):
        self.column = column
        super().__init__(f"column {column} has zero sample standard deviation")


class DegenerateSNRError(ValueError):
    """The signal has zero variance, so an SNR cannot be calibrated."""


class PreconditionError(ValueError):
    """An operation was called on inputs that violate its precondition."""


class UnsupportedModeError(ValueError):
    """The requested mode is not supported by this routine."""


class NumericalError(FloatingPointError):
    """Base class for numerical failures."""


class DivergenceError(NumericalError):
    def __init__(self, iteration, message=None):
        self.iteration = iteration
        super().__init__(message or f"non-finite iterate at iteration {iteration}")


class PowerIterationError(NumericalError):
    def __init__(self, iterations):
        self.iterations = iterations
        super().__init__(f"power iteration did not converge in {iterations} iterations")
