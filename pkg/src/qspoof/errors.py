"""Exception types shared across the package."""


class QspoofError(Exception):
    """Base class for all package-specific errors."""


class ShapeMismatch(QspoofError):
    """Operands have incompatible dimensions or factor layouts."""


class DimensionCapExceeded(QspoofError):
    """A tensor power would exceed the configured dense-dimension cap."""


class DomainError(QspoofError):
    """An input lies outside the mathematical domain of the operation."""


class ConvergenceFailure(QspoofError):
    """The eigensolver failed to converge; fatal for the calling operation."""


class ConfigError(QspoofError):
    """A scenario or CLI configuration violates a named rule."""


class InsufficientData(QspoofError):
    """Too few usable points for a fit."""


class AllErrorsZero(QspoofError):
    """Every error value in a decay fit is exactly zero (exponent is -inf)."""


class ParseError(QspoofError):
    """An input file could not be parsed."""
