"""Exception types shared across the package."""

__all__ = ["CodingError", "ParseError", "PreconditionError", "BudgetError"]


class CodingError(Exception):
    """Base class for all package-specific errors."""


class ParseError(CodingError):
    """Malformed input file, table line, or command-line value."""


class PreconditionError(CodingError):
    """A documented precondition of an operation does not hold."""


class BudgetError(CodingError):
    """An exhaustive computation would exceed the enumeration budget."""
