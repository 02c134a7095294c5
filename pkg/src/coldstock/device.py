"""Freezer-side controller, modeled at firmware fidelity.

Each tick it converts the two raw weight readings to kilograms, latches an
over-limit alert per platform (one SMS per upward crossing, re-armed only
after the weight falls a hysteresis margin below the limit), and remembers
the frame so an incoming authorized call can be answered with a status SMS.

The core transitions are pure functions of (frame, state, config); the
``Controller`` wrapper owns the mutable state for the simulation loop. A
device instance is single-owner and must be called serially.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import ConfigError
from .sensing import (
    ELEV_BAR_CAL,
    MAIN_BRIDGE_CAL,
    CalibrationParams,
    raw_to_weight,
    round_half_away,
)
from .wire import (
    PAYLOAD_MAX_CHARS,
    PLATFORM_ELEV,
    PLATFORM_MAIN,
    WireAlert,
    WireStatus,
    encode_alert,
    encode_status,
    is_valid_msisdn,
)


@dataclass(frozen=True, slots=True)
class DeviceConfig:
    owner_msisdn: str
    authorized: frozenset[str]
    elev_cal: CalibrationParams = ELEV_BAR_CAL
    main_cal: CalibrationParams = MAIN_BRIDGE_CAL
    elev_limit_kg: float = 20.0
    main_limit_kg: float = 80.0
    elev_unit_kg: float = 0.5
    main_unit_kg: float = 0.5
    elev_tare_kg: float = 0.0
    main_tare_kg: float = 0.0
    hysteresis_kg: float = 0.5

    def __post_init__(self) -> None:
        if not is_valid_msisdn(self.owner_msisdn):
            raise ConfigError(f"owner MSISDN {self.owner_msisdn!r} is invalid")
        if self.owner_msisdn not in self.authorized:
            raise ConfigError("owner must be in the authorized set")
        if self.elev_limit_kg <= 0 or self.main_limit_kg <= 0:
            raise ConfigError("platform limits must be positive")
        if self.elev_unit_kg <= 0 or self.main_unit_kg <= 0:
            raise ConfigError("unit weights must be positive")
        if self.elev_tare_kg < 0 or self.main_tare_kg < 0:
            raise ConfigError("tare weights cannot be negative")
        if self.hysteresis_kg < 0:
            raise ConfigError("hysteresis cannot be negative")


@dataclass(frozen=True, slots=True)
class SensorFrame:
    """One synchronized sample: raw counts for both platforms plus quantized temperature."""

    t_ms: int
    elev_raw: int
    main_raw: int
    temp_c: float


@dataclass(frozen=True, slots=True)
class DeviceState:
    seq: int = 0
    elev_alert_latched: bool = False
    main_alert_latched: bool = False
    last_frame: SensorFrame | None = None


@dataclass(frozen=True, slots=True)
class SendSms:
    to: str
    payload: str


@dataclass(frozen=True, slots=True)
class Hangup:
    pass


DeviceAction = SendSms | Hangup


def count_items(gross_kg: float, tare_kg: float, unit_kg: float) -> int:
    """Stock count: net weight over unit weight, rounded ties away, floored at 0."""
    if unit_kg <= 0:
        raise ConfigError("unit weight must be positive")
    return max(0, round_half_away((gross_kg - tare_kg) / unit_kg))


def compose_status(frame: SensorFrame, cfg: DeviceConfig, seq: int) -> str:
    """Build the status payload for one frame; deterministic for identical inputs.

    Counts derive from the measured kilograms before wire rounding, so the
    payload's count fields are authoritative rather than recomputable from
    its two-decimal weights.
    """
    elev_kg = raw_to_weight(frame.elev_raw, cfg.elev_cal)
    main_kg = raw_to_weight(frame.main_raw, cfg.main_cal)
    payload = encode_status(
        WireStatus(
            seq=seq,
            elev_kg=elev_kg,
            main_kg=main_kg,
            count_elev=count_items(elev_kg, cfg.elev_tare_kg, cfg.elev_unit_kg),
            count_main=count_items(main_kg, cfg.main_tare_kg, cfg.main_unit_kg),
            temp_c=frame.temp_c,
        )
    )
    if len(payload) > PAYLOAD_MAX_CHARS:  # unreachable with the fixed schema
        raise RuntimeError("status payload exceeded the SMS budget")
    return payload


def tick(
    frame: SensorFrame, state: DeviceState, cfg: DeviceConfig
) -> tuple[DeviceState, list[DeviceAction]]:
    """Process one sensor frame; emits at most one alert SMS per platform.

    A platform at or over its limit while unlatched sends one alert to the
    owner and latches; the latch clears only once the gross weight falls
    below limit minus hysteresis. Platforms are evaluated in a fixed order
    (elevated first) so sequence numbers are deterministic.
    """
    if state.last_frame is not None and frame.t_ms < state.last_frame.t_ms:
        raise ValueError("frame time must be non-decreasing")
    seq = state.seq
    actions: list[DeviceAction] = []
    latches = {
        PLATFORM_ELEV: state.elev_alert_latched,
        PLATFORM_MAIN: state.main_alert_latched,
    }
    per_platform = (
        (PLATFORM_ELEV, raw_to_weight(frame.elev_raw, cfg.elev_cal), cfg.elev_limit_kg),
        (PLATFORM_MAIN, raw_to_weight(frame.main_raw, cfg.main_cal), cfg.main_limit_kg),
    )
    for platform, gross_kg, limit_kg in per_platform:
        if not latches[platform] and gross_kg >= limit_kg:
            payload = encode_alert(
                WireAlert(seq=seq, platform=platform, kg=gross_kg, limit_kg=limit_kg)
            )
            actions.append(SendSms(to=cfg.owner_msisdn, payload=payload))
            seq += 1
            latches[platform] = True
        elif latches[platform] and gross_kg < limit_kg - cfg.hysteresis_kg:
            latches[platform] = False
    new_state = DeviceState(
        seq=seq,
        elev_alert_latched=latches[PLATFORM_ELEV],
        main_alert_latched=latches[PLATFORM_MAIN],
        last_frame=frame,
    )
    return new_state, actions


def handle_ring(
    caller: str, state: DeviceState, cfg: DeviceConfig
) -> tuple[DeviceState, list[DeviceAction]]:
    """Answer an incoming call: hang up, then text the status to an authorized caller.

    Unauthorized callers, and any call arriving before the first tick, get
    the hangup only.
    """
    if state.last_frame is None or caller not in cfg.authorized:
        return state, [Hangup()]
    payload = compose_status(state.last_frame, cfg, state.seq)
    return replace(state, seq=state.seq + 1), [Hangup(), SendSms(to=caller, payload=payload)]


@dataclass(slots=True)
class Controller:
    """Stateful shell over the pure transition functions."""

    cfg: DeviceConfig
    state: DeviceState = field(default_factory=DeviceState)

    def tick(self, frame: SensorFrame) -> list[DeviceAction]:
        self.state, actions = tick(frame, self.state, self.cfg)
        return actions

    def ring(self, caller: str) -> list[DeviceAction]:
        self.state, actions = handle_ring(caller, self.state, self.cfg)
        return actions
