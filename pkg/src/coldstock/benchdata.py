"""Bench calibration trials for the installed sensors, embedded as constants.

Each weight row is (actual_kg, measured_kg, recorded_pct_error) from the
original bench log; temperature rows are (actual_c, measured_c,
recorded_pct_error). The recorded weight errors follow the symmetric-mean
formula and the temperature errors the reference-relative formula, so the
recompute harness pairs each table with its matching metric. The bench log
also quoted a rounded overall success rate per table, kept here for the
side-by-side print.
"""

from __future__ import annotations

from dataclasses import dataclass

from .sensing import percent_error_ref, percent_error_rpd, success_rate


@dataclass(frozen=True, slots=True)
class TrialTable:
    name: str
    unit: str
    rows: tuple[tuple[float, float, float], ...]
    quoted_success_pct: float
    metric: str  # "rpd" or "ref"


MAIN_WEIGHT_TRIALS = TrialTable(
    name="main platform weight (four-cell bridge)",
    unit="kg",
    rows=(
        (1.0, 1.0, 0.0),
        (10.0, 9.94, 0.602),
        (20.0, 19.91, 0.451),
        (30.0, 30.0, 0.0),
        (40.0, 40.02, 0.05),
    ),
    quoted_success_pct=99.5,
    metric="rpd",
)

ELEV_WEIGHT_TRIALS = TrialTable(
    name="elevated platform weight (bar cell)",
    unit="kg",
    rows=(
        (1.0, 1.02, 1.98),
        (5.0, 4.91, 1.816),
        (10.0, 10.0, 0.0),
        (15.0, 15.01, 0.067),
        (20.0, 19.96, 0.2),
    ),
    quoted_success_pct=99.2,
    metric="rpd",
)

TEMP_TRIALS = TrialTable(
    name="freezer thermometer",
    unit="degC",
    rows=(
        (36.0, 36.0, 0.0),
        (20.0, 18.974, 5.128),
        (10.0, 8.868, 11.321),
        (0.0, 0.0, 0.0),
        (-10.0, -8.947, 10.526),
    ),
    quoted_success_pct=95.0,
    metric="ref",
)

TABLES = {1: MAIN_WEIGHT_TRIALS, 2: ELEV_WEIGHT_TRIALS, 3: TEMP_TRIALS}


@dataclass(frozen=True, slots=True)
class RecomputedRow:
    actual: float
    measured: float
    recorded_pct: float
    recomputed_pct: float

    @property
    def delta(self) -> float:
        return abs(self.recomputed_pct - self.recorded_pct)


@dataclass(frozen=True, slots=True)
class RecomputedTable:
    table: TrialTable
    rows: tuple[RecomputedRow, ...]
    recomputed_success_pct: float


def recompute(table: TrialTable) -> RecomputedTable:
    """Recompute every row with the table's matching error formula."""
    metric = percent_error_rpd if table.metric == "rpd" else percent_error_ref
    rows = tuple(
        RecomputedRow(
            actual=actual,
            measured=measured,
            recorded_pct=recorded,
            recomputed_pct=metric(actual, measured),
        )
        for actual, measured, recorded in table.rows
    )
    return RecomputedTable(
        table=table,
        rows=rows,
        recomputed_success_pct=success_rate([r.recomputed_pct for r in rows]),
    )
