"""Exception taxonomy shared by all modules."""


class SlabkinError(Exception):
    """Base class for all package errors."""


class ParameterError(SlabkinError, ValueError):
    """An argument is outside its documented range."""


class GridMismatchError(SlabkinError, ValueError):
    """Operands live on incompatible velocity or space grids."""


class SingularOperatorError(SlabkinError, ArithmeticError):
    """A linear solve hit a (numerically) singular operator.

    Expected at frequency zero, where the wall-to-wall transfer operator
    has 1 as an eigenvalue.
    """


class ConvergenceError(SlabkinError, RuntimeError):
    """An iterative solver did not converge within its budget."""

    def __init__(self, msg, residual=None):
        super().__init__(msg)
        self.residual = residual


class DataError(SlabkinError, ValueError):
    """Input data violates a precondition (e.g. nonpositive values in a log fit)."""


class StateError(SlabkinError, RuntimeError):
    """An operation was called on an object missing required state."""


class ConfigError(SlabkinError, ValueError):
    """A configuration file or override failed validation."""
