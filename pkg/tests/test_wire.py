from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from coldstock.wire import (
    BadPrefixError,
    ChecksumMismatchError,
    DecodeError,
    FieldOrderError,
    InvalidPlatformError,
    MalformedFieldError,
    NumericOverflowError,
    SmsMessage,
    UnknownVersionError,
    WireAlert,
    WireStatus,
    checksum,
    decode_alert,
    decode_status,
    encode_alert,
    encode_status,
)

# Payloads frozen from an independent byte-sum script.
STAT_EXAMPLE = "STAT;v=1;seq=7;elev=4.91;main=30.00;cElev=10;cMain=60;t=-18.00;cs=133D"
STAT_ZERO = "STAT;v=1;seq=0;elev=0.00;main=0.00;cElev=0;cMain=0;t=0.00;cs=1228"
ALRT_EXAMPLE = "ALRT;v=1;seq=3;plat=MAIN;w=80.20;lim=80.00;cs=0D79"


def reseal(body_without_cs: str) -> str:
    """Append a fresh, correct checksum so decode failures are not integrity failures."""
    body = body_without_cs + ";cs="
    return body + checksum(body)


def grid2(value: float) -> float:
    return round(value * 100) / 100


status_values = st.builds(
    WireStatus,
    seq=st.integers(min_value=0, max_value=2**32 - 1),
    elev_kg=st.integers(min_value=-(10**9) + 1, max_value=10**9 - 1).map(lambda n: n / 100),
    main_kg=st.integers(min_value=-(10**9) + 1, max_value=10**9 - 1).map(lambda n: n / 100),
    count_elev=st.integers(min_value=0, max_value=2**32 - 1),
    count_main=st.integers(min_value=0, max_value=2**32 - 1),
    temp_c=st.integers(min_value=-(10**9) + 1, max_value=10**9 - 1).map(lambda n: n / 100),
)

alert_values = st.builds(
    WireAlert,
    seq=st.integers(min_value=0, max_value=2**32 - 1),
    platform=st.sampled_from(["ELEV", "MAIN"]),
    kg=st.integers(min_value=-(10**9) + 1, max_value=10**9 - 1).map(lambda n: n / 100),
    limit_kg=st.integers(min_value=-(10**9) + 1, max_value=10**9 - 1).map(lambda n: n / 100),
)


class TestChecksum:
    def test_empty_sum(self):
        assert checksum("") == "0000"

    def test_single_byte(self):
        assert checksum("A") == "0041"

    def test_rejects_non_ascii(self):
        with pytest.raises(ValueError):
            checksum("температура")


class TestStatusCodec:
    def test_encode_matches_frozen_payload(self):
        ws = WireStatus(seq=7, elev_kg=4.91, main_kg=30.0, count_elev=10, count_main=60, temp_c=-18.0)
        assert encode_status(ws) == STAT_EXAMPLE

    def test_encode_zero_status(self):
        ws = WireStatus(seq=0, elev_kg=0.0, main_kg=0.0, count_elev=0, count_main=0, temp_c=0.0)
        assert encode_status(ws) == STAT_ZERO

    def test_decode_frozen_payload(self):
        ws = decode_status(STAT_EXAMPLE)
        assert ws == WireStatus(
            seq=7, elev_kg=4.91, main_kg=30.0, count_elev=10, count_main=60, temp_c=-18.0
        )

    @given(status_values)
    def test_round_trip(self, ws):
        assert decode_status(encode_status(ws)) == ws

    def test_flipped_checksum_digit_detected(self):
        bad = STAT_EXAMPLE[:-1] + ("0" if STAT_EXAMPLE[-1] != "0" else "1")
        with pytest.raises(ChecksumMismatchError):
            decode_status(bad)

    def test_unknown_version_gate(self):
        payload = reseal("STAT;v=2;seq=7;elev=4.91;main=30.00;cElev=10;cMain=60;t=-18.00")
        with pytest.raises(UnknownVersionError):
            decode_status(payload)

    def test_bad_prefix(self):
        with pytest.raises(BadPrefixError):
            decode_status("STUS;" + STAT_EXAMPLE[5:])

    def test_field_order_violation(self):
        payload = reseal("STAT;v=1;elev=4.91;seq=7;main=30.00;cElev=10;cMain=60;t=-18.00")
        with pytest.raises(FieldOrderError):
            decode_status(payload)

    def test_missing_field(self):
        payload = reseal("STAT;v=1;seq=7;elev=4.91;main=30.00;cElev=10;cMain=60")
        with pytest.raises(FieldOrderError):
            decode_status(payload)

    def test_malformed_fixed2(self):
        payload = reseal("STAT;v=1;seq=7;elev=4.9;main=30.00;cElev=10;cMain=60;t=-18.00")
        with pytest.raises(MalformedFieldError):
            decode_status(payload)

    def test_seq_overflow(self):
        payload = reseal("STAT;v=1;seq=4294967296;elev=4.91;main=30.00;cElev=10;cMain=60;t=-18.00")
        with pytest.raises(NumericOverflowError):
            decode_status(payload)

    def test_encode_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            encode_status(
                WireStatus(seq=-1, elev_kg=0, main_kg=0, count_elev=0, count_main=0, temp_c=0)
            )
        with pytest.raises(ValueError):
            encode_status(
                WireStatus(
                    seq=0, elev_kg=float("nan"), main_kg=0, count_elev=0, count_main=0, temp_c=0
                )
            )


class TestAlertCodec:
    def test_encode_matches_frozen_payload(self):
        assert encode_alert(WireAlert(seq=3, platform="MAIN", kg=80.2, limit_kg=80.0)) == ALRT_EXAMPLE

    def test_round_trip_example(self):
        assert decode_alert(ALRT_EXAMPLE) == WireAlert(seq=3, platform="MAIN", kg=80.2, limit_kg=80.0)

    @given(alert_values)
    def test_round_trip(self, wa):
        assert decode_alert(encode_alert(wa)) == wa

    def test_invalid_platform_token(self):
        payload = reseal("ALRT;v=1;seq=3;plat=SIDE;w=80.20;lim=80.00")
        with pytest.raises(InvalidPlatformError):
            decode_alert(payload)

    def test_below_limit_weight_is_accepted(self):
        payload = reseal("ALRT;v=1;seq=3;plat=MAIN;w=10.00;lim=80.00")
        wa = decode_alert(payload)
        assert wa.kg == 10.0 and wa.limit_kg == 80.0


class TestMutationRejection:
    """Any single-character substitution shifts the byte sum by less than
    2**16, so the checksum must catch whatever the grammar does not."""

    def mutate(self, rng: random.Random, payload: str) -> str:
        pos = rng.randrange(len(payload))
        old = payload[pos]
        new = old
        while new == old:
            new = chr(rng.randrange(32, 127))
        return payload[:pos] + new + payload[pos + 1 :]

    def test_stat_mutations_rejected(self):
        rng = random.Random(7)
        for _ in range(2000):
            with pytest.raises(DecodeError):
                decode_status(self.mutate(rng, STAT_EXAMPLE))

    def test_alrt_mutations_rejected(self):
        rng = random.Random(8)
        for _ in range(2000):
            with pytest.raises(DecodeError):
                decode_alert(self.mutate(rng, ALRT_EXAMPLE))


class TestSmsMessage:
    def test_valid_message(self):
        msg = SmsMessage("+639170000000", "+639170000001", "hello", 0)
        assert msg.payload == "hello"

    def test_payload_budget_enforced(self):
        with pytest.raises(ValueError):
            SmsMessage("+639170000000", "+639170000001", "x" * 161, 0)

    def test_non_ascii_payload_rejected(self):
        with pytest.raises(ValueError):
            SmsMessage("+639170000000", "+639170000001", "héllo", 0)

    @pytest.mark.parametrize("bad", ["639170000000", "+12345", "+1234567890123456", "+63abc"])
    def test_bad_phone_rejected(self, bad):
        with pytest.raises(ValueError):
            SmsMessage(bad, "+639170000001", "hi", 0)
