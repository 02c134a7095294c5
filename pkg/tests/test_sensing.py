from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from coldstock.errors import DegenerateDataError, UndefinedDenominatorError
from coldstock.sensing import (
    ADC_MAX,
    ADC_MIN,
    CalibrationParams,
    CornerGains,
    ELEV_BAR_CAL,
    IDEAL_GAINS,
    MAIN_BRIDGE_CAL,
    bridge_raw,
    fit_calibration,
    load_calibration_pairs,
    percent_error_ref,
    percent_error_rpd,
    quantize_temp,
    raw_to_weight,
    success_rate,
    weight_to_raw,
)

BOTH_CALS = (MAIN_BRIDGE_CAL, ELEV_BAR_CAL)


class TestRawToWeight:
    def test_offset_is_zero_load(self):
        assert raw_to_weight(-922_696, MAIN_BRIDGE_CAL) == 0.0

    def test_main_channel_ten_kg(self):
        assert raw_to_weight(-1_017_446, MAIN_BRIDGE_CAL) == 10.0

    def test_elev_channel_five_kg(self):
        assert raw_to_weight(390_968, ELEV_BAR_CAL) == 5.0

    def test_zero_factor_rejected(self):
        with pytest.raises(ValueError):
            CalibrationParams(factor=0, offset=1)


class TestWeightToRaw:
    def test_zero_load_returns_offset(self):
        assert weight_to_raw(0, ELEV_BAR_CAL) == 190_468

    def test_five_kg(self):
        assert weight_to_raw(5, ELEV_BAR_CAL) == 390_968

    def test_saturates_at_adc_max(self):
        assert weight_to_raw(10**6, ELEV_BAR_CAL) == ADC_MAX

    def test_saturates_at_adc_min(self):
        assert weight_to_raw(10**6, MAIN_BRIDGE_CAL) == ADC_MIN

    @given(
        kg=st.floats(min_value=0.0, max_value=200.0, allow_nan=False),
        cal=st.sampled_from(BOTH_CALS),
    )
    def test_round_trip_within_one_count(self, kg, cal):
        back = raw_to_weight(weight_to_raw(kg, cal), cal)
        assert abs(back - kg) <= 1.0 / abs(cal.factor)


class TestBridgeRaw:
    def test_even_distribution_matches_plain_transform(self):
        d = [0.25, 0.25, 0.25, 0.25]
        assert bridge_raw(40, d, IDEAL_GAINS, MAIN_BRIDGE_CAL) == weight_to_raw(40, MAIN_BRIDGE_CAL)

    def test_corner_loading_is_equivalent_under_ideal_gains(self):
        even = bridge_raw(40, [0.25] * 4, IDEAL_GAINS, MAIN_BRIDGE_CAL)
        corner = bridge_raw(40, [1, 0, 0, 0], IDEAL_GAINS, MAIN_BRIDGE_CAL)
        assert corner == even

    def test_gain_error_shifts_effective_load(self):
        gains = CornerGains((1.01, 1.0, 1.0, 1.0))
        got = bridge_raw(40, [1, 0, 0, 0], gains, MAIN_BRIDGE_CAL)
        assert got == weight_to_raw(40.4, MAIN_BRIDGE_CAL)

    def test_bad_distribution_sum_rejected(self):
        with pytest.raises(ValueError):
            bridge_raw(40, [0.3, 0.3, 0.3, 0.3], IDEAL_GAINS, MAIN_BRIDGE_CAL)

    def test_negative_entry_rejected(self):
        with pytest.raises(ValueError):
            bridge_raw(40, [1.2, -0.2, 0, 0], IDEAL_GAINS, MAIN_BRIDGE_CAL)

    def test_non_positive_gain_rejected(self):
        with pytest.raises(ValueError):
            CornerGains((1.0, 0.0, 1.0, 1.0))

    @given(
        weights=st.lists(st.floats(min_value=0.001, max_value=1.0), min_size=4, max_size=4),
        total=st.floats(min_value=0.0, max_value=200.0),
    )
    def test_ideal_gains_invariant_over_distribution(self, weights, total):
        s = sum(weights)
        d = [w / s for w in weights]
        assert bridge_raw(total, d, IDEAL_GAINS, MAIN_BRIDGE_CAL) == weight_to_raw(
            total, MAIN_BRIDGE_CAL
        )


class TestQuantizeTemp:
    def test_on_grid_unchanged(self):
        assert quantize_temp(-18.0) == -18.0

    def test_rounds_to_nearest_sixteenth(self):
        assert quantize_temp(18.9744) == 19.0

    def test_upper_clamp(self):
        assert quantize_temp(130.2) == 125.0

    def test_lower_clamp(self):
        assert quantize_temp(-80.0) == -55.0

    def test_ties_away_from_zero(self):
        assert quantize_temp(0.03125) == 0.0625
        assert quantize_temp(-0.03125) == -0.0625

    @given(st.floats(min_value=-55.0, max_value=125.0, allow_nan=False))
    def test_idempotent_and_bounded_error(self, celsius):
        once = quantize_temp(celsius)
        assert quantize_temp(once) == once
        assert abs(once - celsius) <= 0.03125 + 1e-12
        assert round(once * 16) == pytest.approx(once * 16)


class TestFitCalibration:
    def test_three_point_exact_recovery(self):
        pairs = [(190_468, 0.0), (230_568, 1.0), (390_968, 5.0)]
        cal = fit_calibration(pairs)
        assert cal.factor == 40_100.0
        assert cal.offset == 190_468

    def test_two_point_fit(self):
        cal = fit_calibration([(-922_696, 0.0), (-1_017_446, 10.0)])
        assert cal.factor == -9475.0
        assert cal.offset == -922_696

    def test_single_abscissa_rejected(self):
        with pytest.raises(DegenerateDataError):
            fit_calibration([(100, 5.0), (200, 5.0)])

    def test_too_few_pairs_rejected(self):
        with pytest.raises(DegenerateDataError):
            fit_calibration([(100, 5.0)])

    @given(
        factor=st.integers(min_value=-50_000, max_value=50_000).filter(lambda f: f != 0),
        offset=st.integers(min_value=-8_000_000, max_value=8_000_000),
        kgs=st.lists(st.integers(min_value=0, max_value=200), min_size=2, max_size=10, unique=True),
    )
    def test_exact_linear_data_recovers_parameters(self, factor, offset, kgs):
        pairs = [(offset + factor * kg, float(kg)) for kg in kgs]
        cal = fit_calibration(pairs)
        assert cal.offset == offset
        assert math.isclose(cal.factor, factor, rel_tol=1e-9)


class TestPercentErrors:
    def test_rpd_examples(self):
        assert percent_error_rpd(10, 9.94) == pytest.approx(0.6018, abs=5e-5)
        assert percent_error_rpd(1, 1.02) == pytest.approx(1.9802, abs=5e-5)
        assert percent_error_rpd(30, 30) == 0.0

    def test_rpd_zero_denominator(self):
        with pytest.raises(UndefinedDenominatorError):
            percent_error_rpd(1.0, -1.0)

    def test_ref_examples(self):
        assert percent_error_ref(10, 8.868) == pytest.approx(11.32, abs=5e-3)
        assert percent_error_ref(-10, -8.947) == pytest.approx(10.53, abs=5e-3)
        assert percent_error_ref(0, 0) == 0.0

    def test_ref_zero_actual(self):
        with pytest.raises(UndefinedDenominatorError):
            percent_error_ref(0.0, 1.0)

    @given(
        a=st.floats(min_value=0.1, max_value=1000, allow_nan=False),
        m=st.floats(min_value=0.1, max_value=1000, allow_nan=False),
    )
    def test_rpd_is_symmetric(self, a, m):
        assert percent_error_rpd(a, m) == percent_error_rpd(m, a)

    @given(
        a=st.integers(min_value=1, max_value=1000),
        m=st.integers(min_value=1, max_value=1000),
    )
    def test_ref_is_not_symmetric(self, a, m):
        if abs(a) != abs(m):
            assert percent_error_ref(a, m) != percent_error_ref(m, a)


class TestSuccessRate:
    def test_recomputed_elevated_table(self):
        assert success_rate([1.9802, 1.8163, 0, 0.0666, 0.2002]) == pytest.approx(99.187, abs=1e-3)

    def test_recorded_temperature_table(self):
        assert success_rate([0, 5.128, 11.321, 0, 10.526]) == pytest.approx(94.605, abs=1e-3)

    def test_perfect_measurements(self):
        assert success_rate([0, 0, 0]) == 100.0

    def test_empty_rejected(self):
        with pytest.raises(DegenerateDataError):
            success_rate([])


class TestPairsCsv:
    def test_round_trips_pairs(self, tmp_path):
        path = tmp_path / "pairs.csv"
        path.write_text("raw,kg\n190468,0\n390968,5\n", encoding="utf-8")
        assert load_calibration_pairs(str(path)) == [(190_468, 0.0), (390_968, 5.0)]

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "pairs.csv"
        path.write_text("kg,raw\n0,190468\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_calibration_pairs(str(path))

    def test_bad_row_names_line(self, tmp_path):
        path = tmp_path / "pairs.csv"
        path.write_text("raw,kg\n190468,0\nnope,5\n", encoding="utf-8")
        with pytest.raises(ValueError, match="line 3"):
            load_calibration_pairs(str(path))
