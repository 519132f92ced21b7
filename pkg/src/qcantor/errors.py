"""Exception types shared across the package."""


class NotPeriodicError(ValueError):
    """Raised when an operation needs an eventually periodic basic sequence."""


class StreamExhaustedError(IndexError):
    """Raised when a digit stream (or truncated basic sequence) runs out."""


class UnresolvedBoundaryError(ArithmeticError):
    """An interval endpoint could not be separated from a stream-approximated point."""


class InequivalentBasesError(ValueError):
    """Raised when a base g is not multiplicatively equivalent to the period product."""
