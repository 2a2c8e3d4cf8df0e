"""Exception hierarchy shared by every module of the package."""


class CauchyIdError(Exception):
    """Base class for all package errors."""


class ParameterError(CauchyIdError, ValueError):
    """Inputs outside the documented domain of an operation."""


class RangeError(CauchyIdError, ArithmeticError):
    """Result cannot be represented in double precision."""


class ConvergenceError(CauchyIdError, ArithmeticError):
    """A numerical procedure failed to reach its requested accuracy."""


class ConsistencyError(CauchyIdError, AssertionError):
    """Two independent routes disagree, e.g. a classifier contradicts janson_gate."""
