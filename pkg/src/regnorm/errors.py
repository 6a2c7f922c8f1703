"""Exception taxonomy shared by every module in this package.

Each class marks a distinct failure mode so that callers (and the CLI) can
map problems onto exit codes without string-matching messages.
"""

from __future__ import annotations


class RegnormError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(RegnormError):
    """Raised when an input file or literal cannot be decoded.

    The message names the offending line or field.
    """


class StructuralError(RegnormError):
    """Raised when decoded data has inconsistent shape or metadata.

    Examples: entry count not equal to rows*cols, a basis vector whose
    length differs from the declared ambient dimension, mismatched
    basis/image counts.
    """


class DomainError(RegnormError):
    """Raised when a value lies outside its mathematical domain.

    Examples: an exponent p < 1, theta outside [0, 1], a negative entry
    in a vector that must be nonnegative.
    """


class BudgetError(RegnormError):
    """Raised when an iteration budget is exhausted before the requested
    tolerance is certified.

    ``best`` carries the best enclosure or feasible point found so far,
    so callers can still inspect partial progress.
    """

    def __init__(self, message: str, best: object = None):
        super().__init__(message)
        self.best = best


class RefusalError(RegnormError):
    """Raised by reference oracles asked to handle sizes beyond the range
    they can certify by enumeration."""
