"""Numeric core for the two weight channels and the freezer thermometer.

Raw weight readings are 24-bit signed ADC counts (the amplifier behind both
load-cell channels is a 24-bit part); they map to kilograms through a linear
calibration ``kg = (raw - offset) / factor``. The main platform aggregates
four corner cells into one bridge channel, the elevated platform is a single
bar cell. Temperature readings snap to the thermometer's 1/16 degC grid and
clamp to its [-55, +125] degC range.

All functions here are pure; concurrent callers are safe.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DegenerateDataError, UndefinedDenominatorError

ADC_MIN = -8_388_608
ADC_MAX = 8_388_607

TEMP_STEP_C = 0.0625
TEMP_MIN_C = -55.0
TEMP_MAX_C = 125.0


@dataclass(frozen=True, slots=True)
class CalibrationParams:
    """Linear raw-counts <-> kilogram transform for one weight channel.

    ``factor`` is ADC counts per kilogram, ``offset`` the counts at zero load.
    """

    factor: float
    offset: int

    def __post_init__(self) -> None:
        if self.factor == 0:
            raise ValueError("calibration factor must be nonzero")


# Bench calibration constants for the two installed channels.
MAIN_BRIDGE_CAL = CalibrationParams(factor=-9475.0, offset=-922_696)
ELEV_BAR_CAL = CalibrationParams(factor=40_100.0, offset=190_468)


@dataclass(frozen=True, slots=True)
class CornerGains:
    """Per-corner sensitivity multipliers of the four-cell bridge; ideal is all ones."""

    g: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)

    def __post_init__(self) -> None:
        if len(self.g) != 4 or any(gi <= 0 for gi in self.g):
            raise ValueError("corner gains must be 4 positive reals")


IDEAL_GAINS = CornerGains()


def round_half_away(x: float) -> int:
    """Round to the nearest integer with ties away from zero."""
    if x >= 0:
        return math.floor(x + 0.5)
    return math.ceil(x - 0.5)


def clamp_adc(counts: int) -> int:
    """Saturate a count value to the 24-bit two's-complement range."""
    return max(ADC_MIN, min(ADC_MAX, counts))


def raw_to_weight(raw: int, cal: CalibrationParams) -> float:
    """Convert raw ADC counts to kilograms. Exact real arithmetic, no rounding."""
    return (raw - cal.offset) / cal.factor


def weight_to_raw(kg: float, cal: CalibrationParams) -> int:
    """Inverse transform used by the plant simulator; saturates at the 24-bit range."""
    return clamp_adc(round_half_away(cal.offset + cal.factor * kg))


def bridge_raw(
    total_kg: float,
    distribution: Sequence[float],
    gains: CornerGains,
    cal: CalibrationParams,
) -> int:
    """Raw counts for ``total_kg`` spread across the four bridge corners.

    ``distribution`` gives the load fraction on each corner; entries must be
    nonnegative and sum to 1 within 1e-9. The per-corner gains are averaged
    weighted by the distribution (normalized by its actual sum, so the 1e-9
    slack cannot shift an ideal bridge by a count): with ideal gains the
    result equals ``weight_to_raw(total_kg, cal)`` for every valid
    distribution, exactly.
    """
    if len(distribution) != 4:
        raise ValueError("distribution must have 4 entries")
    if any(d < 0 for d in distribution):
        raise ValueError("distribution entries must be nonnegative")
    total = math.fsum(distribution)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"distribution must sum to 1 (got {total!r})")
    scale = math.fsum(d * g for d, g in zip(distribution, gains.g)) / total
    return weight_to_raw(total_kg * scale, cal)


def quantize_temp(celsius: float) -> float:
    """Snap to the thermometer grid: nearest 1/16 degC, ties away from zero, then clamp."""
    on_grid = round_half_away(celsius / TEMP_STEP_C) * TEMP_STEP_C
    return max(TEMP_MIN_C, min(TEMP_MAX_C, on_grid))


def fit_calibration(pairs: Iterable[tuple[int, float]]) -> CalibrationParams:
    """Least-squares line ``raw = offset + factor * kg`` over (raw, kg) pairs.

    The offset is rounded to an integer count. Uses the n*sum form of the
    normal equations so that exactly linear integer-valued data recovers the
    generating parameters exactly.

    Raises DegenerateDataError for fewer than two pairs or a single distinct
    kg value.
    """
    pts = list(pairs)
    if len(pts) < 2:
        raise DegenerateDataError("need at least 2 calibration pairs")
    n = len(pts)
    kgs = [float(kg) for _, kg in pts]
    raws = [float(raw) for raw, _ in pts]
    if len(set(kgs)) < 2:
        raise DegenerateDataError("need at least 2 distinct kg values")
    sum_x = math.fsum(kgs)
    sum_y = math.fsum(raws)
    sum_xx = math.fsum(x * x for x in kgs)
    sum_xy = math.fsum(x * y for x, y in zip(kgs, raws))
    denom = n * sum_xx - sum_x * sum_x
    if denom == 0:
        raise DegenerateDataError("kg values are collinear with a single abscissa")
    factor = (n * sum_xy - sum_x * sum_y) / denom
    offset = (sum_y - factor * sum_x) / n
    return CalibrationParams(factor=factor, offset=round_half_away(offset))


def percent_error_rpd(actual: float, measured: float) -> float:
    """Relative percent difference: |a-m| / ((a+m)/2) * 100.

    This symmetric-mean form is what the recorded weight-channel error
    columns follow.
    """
    denom = (actual + measured) / 2.0
    if denom == 0:
        raise UndefinedDenominatorError("actual + measured is zero")
    return abs(actual - measured) / abs(denom) * 100.0


def percent_error_ref(actual: float, measured: float) -> float:
    """Reference-relative percent error: |a-m| / |a| * 100; 0 when both are 0.

    The recorded thermometer error column follows this form. Not symmetric
    in its arguments.
    """
    if actual == 0:
        if measured == 0:
            return 0.0
        raise UndefinedDenominatorError("actual is zero but measured is not")
    return abs(actual - measured) / abs(actual) * 100.0


def success_rate(errors: Sequence[float]) -> float:
    """100 minus the mean of a nonempty list of percent errors."""
    if not errors:
        raise DegenerateDataError("cannot take success rate of an empty list")
    return 100.0 - math.fsum(errors) / len(errors)


def load_calibration_pairs(path: str) -> list[tuple[int, float]]:
    """Read calibration pairs from a CSV file with header ``raw,kg``."""
    pairs: list[tuple[int, float]] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["raw", "kg"]:
            raise ValueError(f"{path}: expected CSV header 'raw,kg'")
        for row_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise ValueError(f"{path}: line {row_no}: expected two fields")
            try:
                pairs.append((int(row[0]), float(row[1])))
            except ValueError as exc:
                raise ValueError(f"{path}: line {row_no}: {exc}") from None
    return pairs
