"""
Lab exceptions.
"""
from typing import Any


class GrokLabError(Exception):
    """Base class for every error raised by the lab."""


class DomainError(GrokLabError, ValueError):
    """Raised when an argument violates a precondition (range, shape, kind)."""


class OutOfBoundsError(DomainError):
    """Raised when a point lies outside the hull of a landscape grid."""

    def __init__(self, point: tuple[float, float], bounds: tuple[tuple[float, float], ...]):
        self.point = point
        self.bounds = bounds
        super().__init__(f"Point {point} lies outside the grid hull {bounds}")


class NumericError(GrokLabError, ArithmeticError):
    """
    Raised when a non-finite value shows up during optimisation.

    Keeps the step index so sweeps and grids can report where it happened.
    """

    def __init__(self, message: str, step: int):
        self.step = step
        super().__init__(f"{message} at step {step}")


class IngestionError(GrokLabError, OSError):
    """Raised when a dataset file cannot be read."""

    def __init__(self, path: Any, message: str):
        self.path = str(path)
        super().__init__(f"{self.path}: {message}")


class MissingFileError(IngestionError):
    """Dataset file not found."""


class BadMagicError(IngestionError):
    """IDX header carries an unexpected magic number."""


class TruncatedPayloadError(IngestionError):
    """IDX payload is shorter than the header announces."""


class RecordsParseError(GrokLabError):
    """
    Raised when a record or trajectory file cannot be parsed.

    Names the file and, when known, the offending line.
    """

    def __init__(self, path: Any, message: str, line: int | None = None):
        self.path = str(path)
        self.line = line
        where = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{where}: {message}")

