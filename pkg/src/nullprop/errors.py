"""Exception hierarchy shared by every module of the package."""


class NullPropError(Exception):
    """Base class for all package errors."""


class ConfigurationError(NullPropError, ValueError):
    """Invalid or inconsistent configuration (intervals, grids, missing constants)."""


class DomainError(NullPropError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedConstruction(NullPropError):
    """The requested (family, null) pair has no valid matching function."""


class NumericRangeError(NullPropError, ArithmeticError):
    """An intermediate quantity would overflow double precision."""


class QuadratureResourceError(NullPropError, RuntimeError):
    """A quadrature request would exceed the configured panel budget."""
