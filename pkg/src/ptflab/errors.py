"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: ``InputError`` -> 2,
``CapExceededError`` -> 3, ``InvariantViolationError`` -> 4.
"""


class PtflabError(Exception):
    """Base class for every error raised by this package."""


class InputError(PtflabError, ValueError):
    """Malformed or out-of-contract input (bad dimension, index, file content)."""


class CapExceededError(PtflabError):
    """The request needs an enumeration larger than the exact-path cap allows."""


class InvariantViolationError(PtflabError):
    """An algebraic identity the implementation guarantees failed to hold."""
