"""Exception types raised across the package."""

from __future__ import annotations


class GridScanError(Exception):
    """Base class for every error raised by gridscan."""


class EmptyDataset(GridScanError, ValueError):
    pass


class DimensionMismatch(GridScanError, ValueError):
    pass


class InvalidCoordinate(GridScanError, ValueError):
    pass


class OutOfDomain(GridScanError, ValueError):
    pass


class InvalidIndex(GridScanError, ValueError):
    pass


class NoCellsKept(GridScanError, ValueError):
    pass


class InvalidDimension(GridScanError, ValueError):
    pass


class DegenerateCovariance(GridScanError, ValueError):
    pass


class ParseError(GridScanError, ValueError):
    """Non-numeric content where a number was expected.

    ``location`` is a human-readable ``line:column`` (CSV) or ``row:column``
    (JSON) string.
    """

    def __init__(self, message: str, location: str | None = None):
        super().__init__(message if location is None else f"{location}: {message}")
        self.location = location


class IoError(GridScanError, OSError):
    """A report, plot or data file could not be written."""
