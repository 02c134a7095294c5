"""Exception types shared across the package.

Codec-specific decode errors live in ``coldstock.wire`` because the
gateway logs their ``kind`` verbatim; everything else is here.
"""

from __future__ import annotations


class ColdstockError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(ColdstockError):
    """A configuration value violates its contract (bad limit, missing MSISDN, ...)."""


class DegenerateDataError(ColdstockError, ValueError):
    """Input data cannot support the requested computation (too few points, single abscissa, empty list)."""


class UndefinedDenominatorError(ColdstockError, ValueError):
    """A percent-error denominator is zero for the given operands."""


class ScenarioParseError(ColdstockError, ValueError):
    """A scenario file line failed to parse; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
