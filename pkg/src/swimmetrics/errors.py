"""Exception hierarchy shared across the package."""

from __future__ import annotations


class SwimMetricsError(Exception):
    """Base class for all errors raised by this package."""


class SequenceFormatError(SwimMetricsError):
    """Malformed or invariant-violating landmark interchange data.

    ``line`` is the 1-based line number of the offending record, or None
    when the error is not attributable to a single line.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"{message} at line {line}"
        super().__init__(message)
        self.line = line


class GeometryError(SwimMetricsError):
    """Degenerate frame geometry (zero-length reference line or arm vector)."""


class InsufficientDataError(SwimMetricsError):
    """Not enough frames, samples, or events to run an operation."""


class EstimationError(SwimMetricsError):
    """An estimator ran but could not produce a defined result."""
