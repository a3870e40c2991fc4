"""Exception types shared across the package.

The CLI maps these onto exit codes: ValidationError -> 1, ParseError and
plain I/O failures -> 2, NumericalError -> 3.
"""


class GencsError(Exception):
    """Base class for all package errors."""


class ValidationError(GencsError):
    """An input violates a documented precondition or invariant."""


class ParseError(GencsError):
    """A file or stream does not match its documented format."""


class NumericalError(GencsError):
    """A computation cannot proceed (degenerate denominator, divergence)."""
