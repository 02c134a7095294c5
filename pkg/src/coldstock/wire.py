"""Text SMS payload grammar for status and alert telemetry.

Two payload kinds, both flat key=value lists, ASCII, at most 160 characters:

    STAT;v=1;seq=<u>;elev=<f2>;main=<f2>;cElev=<u>;cMain=<u>;t=<f2>;cs=<hex4>
    ALRT;v=1;seq=<u>;plat=<ELEV|MAIN>;w=<f2>;lim=<f2>;cs=<hex4>

``<u>`` is an unsigned decimal that must fit in 32 bits, ``<f2>`` a fixed
two-decimal real with an optional leading ``-``, ``<hex4>`` four upper-case
hex digits. The checksum is the byte sum of everything up to and including
the literal ``;cs=``, modulo 65536. Real SMS transport can truncate, so the
decoder verifies the checksum before trusting any field.

Decoders validate transport integrity and grammar only; device policy such
as "alert weight at least the limit" is deliberately not re-checked here.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import ColdstockError

PAYLOAD_MAX_CHARS = 160
U32_MAX = 2**32 - 1

PLATFORM_ELEV = "ELEV"
PLATFORM_MAIN = "MAIN"

_PHONE_RE = re.compile(r"\+\d{7,15}\Z")
_UNSIGNED_RE = re.compile(r"\d{1,10}\Z")
_FIXED2_RE = re.compile(r"-?\d{1,7}\.\d{2}\Z")
_HEX4_RE = re.compile(r"[0-9A-F]{4}\Z")

_STAT_KEYS = ("v", "seq", "elev", "main", "cElev", "cMain", "t", "cs")
_ALRT_KEYS = ("v", "seq", "plat", "w", "lim", "cs")


class DecodeError(ColdstockError, ValueError):
    """A payload failed to decode; ``kind`` names the failure for logging."""

    kind = "decode_error"

    def __init__(self, message: str):
        super().__init__(message)


class BadPrefixError(DecodeError):
    kind = "bad_prefix"


class UnknownVersionError(DecodeError):
    kind = "unknown_version"


class FieldOrderError(DecodeError):
    kind = "field_order"


class MalformedFieldError(DecodeError):
    kind = "malformed_field"


class ChecksumMismatchError(DecodeError):
    kind = "checksum_mismatch"


class NumericOverflowError(DecodeError):
    kind = "numeric_overflow"


class InvalidPlatformError(DecodeError):
    kind = "invalid_platform"


def is_valid_msisdn(number: str) -> bool:
    """True for ``+`` followed by 7 to 15 digits."""
    return bool(_PHONE_RE.match(number))


@dataclass(frozen=True, slots=True)
class SmsMessage:
    """One SMS in flight: sender, recipient, ASCII payload, submission time."""

    sender: str
    recipient: str
    payload: str
    submitted_at_ms: int

    def __post_init__(self) -> None:
        for label, number in (("sender", self.sender), ("recipient", self.recipient)):
            if not is_valid_msisdn(number):
                raise ValueError(f"{label} {number!r} is not a valid MSISDN")
        if len(self.payload) > PAYLOAD_MAX_CHARS:
            raise ValueError(f"payload exceeds {PAYLOAD_MAX_CHARS} characters")
        if not self.payload.isascii():
            raise ValueError("payload must be ASCII")
        if self.submitted_at_ms < 0:
            raise ValueError("submitted_at_ms must be nonnegative")


@dataclass(frozen=True, slots=True)
class WireStatus:
    """Decoded status snapshot: weights, derived counts, temperature."""

    seq: int
    elev_kg: float
    main_kg: float
    count_elev: int
    count_main: int
    temp_c: float


@dataclass(frozen=True, slots=True)
class WireAlert:
    """Decoded over-limit alert for one platform."""

    seq: int
    platform: str
    kg: float
    limit_kg: float


def checksum(text_before_cs: str) -> str:
    """Byte sum mod 65536 of the payload up to and including ``;cs=``, as 4 hex digits."""
    if not text_before_cs.isascii():
        raise ValueError("checksum input must be ASCII")
    return format(sum(text_before_cs.encode("ascii")) % 65536, "04X")


def _check_unsigned(name: str, value: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ValueError(f"{name} must be a nonnegative integer")
    if value > U32_MAX:
        raise ValueError(f"{name} does not fit in 32 bits")


def _check_fixed2(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite")
    if abs(value) >= 10**7:
        raise ValueError(f"{name} out of wire range")


def _fmt2(value: float) -> str:
    text = f"{value:.2f}"
    return "0.00" if text == "-0.00" else text  # negative zero never hits the wire


def encode_status(ws: WireStatus) -> str:
    _check_unsigned("seq", ws.seq)
    _check_unsigned("cElev", ws.count_elev)
    _check_unsigned("cMain", ws.count_main)
    for name, value in (("elev", ws.elev_kg), ("main", ws.main_kg), ("t", ws.temp_c)):
        _check_fixed2(name, value)
    body = (
        f"STAT;v=1;seq={ws.seq};elev={_fmt2(ws.elev_kg)};main={_fmt2(ws.main_kg)};"
        f"cElev={ws.count_elev};cMain={ws.count_main};t={_fmt2(ws.temp_c)};cs="
    )
    return body + checksum(body)


def encode_alert(wa: WireAlert) -> str:
    _check_unsigned("seq", wa.seq)
    if wa.platform not in (PLATFORM_ELEV, PLATFORM_MAIN):
        raise ValueError(f"platform must be {PLATFORM_ELEV} or {PLATFORM_MAIN}")
    _check_fixed2("w", wa.kg)
    _check_fixed2("lim", wa.limit_kg)
    body = f"ALRT;v=1;seq={wa.seq};plat={wa.platform};w={_fmt2(wa.kg)};lim={_fmt2(wa.limit_kg)};cs="
    return body + checksum(body)


def _split_verified(text: str, prefix: str, keys: tuple[str, ...]) -> dict[str, str]:
    """Shared decode pipeline: prefix, checksum, version, field order.

    Returns the key -> raw value map (without the cs field). The checksum is
    verified before any field content is trusted, and the version gate runs
    before the remaining field keys are checked so that future versions fail
    as unknown-version rather than as a grammar error.
    """
    if not text.startswith(prefix + ";"):
        raise BadPrefixError(f"payload does not start with {prefix!r}")
    if not text.isascii():
        raise ChecksumMismatchError("payload contains non-ASCII bytes")
    cs_at = text.rfind(";cs=")
    if cs_at < 0:
        raise FieldOrderError("missing cs field")
    summed, declared = text[: cs_at + 4], text[cs_at + 4 :]
    if not _HEX4_RE.match(declared):
        raise ChecksumMismatchError("checksum digest is not 4 upper-case hex digits")
    computed = checksum(summed)
    if computed != declared:
        raise ChecksumMismatchError(f"checksum {declared} does not match computed {computed}")

    fields = text[:cs_at].split(";")[1:]  # drop the payload-kind token
    parsed: list[tuple[str, str]] = []
    for field in fields:
        key, eq, value = field.partition("=")
        if not eq:
            raise FieldOrderError(f"field {field!r} is not key=value")
        parsed.append((key, value))
    if not parsed or parsed[0][0] != "v":
        raise FieldOrderError("first field must be the version")
    if parsed[0][1] != "1":
        raise UnknownVersionError(f"unsupported version {parsed[0][1]!r}")
    expected = keys[:-1]  # cs was consumed above
    got = tuple(key for key, _ in parsed)
    if got != expected:
        raise FieldOrderError(f"fields {got} do not match expected order {expected}")
    return dict(parsed)


def _parse_unsigned(name: str, raw: str) -> int:
    if not _UNSIGNED_RE.match(raw):
        raise MalformedFieldError(f"{name}={raw!r} is not an unsigned decimal")
    value = int(raw)
    if value > U32_MAX:
        raise NumericOverflowError(f"{name}={raw} does not fit in 32 bits")
    return value


def _parse_fixed2(name: str, raw: str) -> float:
    if not _FIXED2_RE.match(raw):
        raise MalformedFieldError(f"{name}={raw!r} is not a fixed 2-decimal real")
    return float(raw)


def decode_status(text: str) -> WireStatus:
    values = _split_verified(text, "STAT", _STAT_KEYS)
    return WireStatus(
        seq=_parse_unsigned("seq", values["seq"]),
        elev_kg=_parse_fixed2("elev", values["elev"]),
        main_kg=_parse_fixed2("main", values["main"]),
        count_elev=_parse_unsigned("cElev", values["cElev"]),
        count_main=_parse_unsigned("cMain", values["cMain"]),
        temp_c=_parse_fixed2("t", values["t"]),
    )


def decode_alert(text: str) -> WireAlert:
    values = _split_verified(text, "ALRT", _ALRT_KEYS)
    platform = values["plat"]
    if platform not in (PLATFORM_ELEV, PLATFORM_MAIN):
        raise InvalidPlatformError(f"plat={platform!r} is not a known platform")
    return WireAlert(
        seq=_parse_unsigned("seq", values["seq"]),
        platform=platform,
        kg=_parse_fixed2("w", values["w"]),
        limit_kg=_parse_fixed2("lim", values["lim"]),
    )
