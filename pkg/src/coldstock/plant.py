"""Physical truth for the simulation: weights, freezer air temperature, noise.

Weights only change through scripted stock events. Temperature follows a
first-order pull toward the setpoint (door closed) or ambient (door open),
integrated with one explicit Euler step per tick; at these time constants
accuracy is irrelevant and determinism is the requirement. ADC noise is
additive Gaussian on raw counts, which is where real amplifier noise
enters, never on kilograms.

Scenario files script the run: one directive per line,

    t=<ms> <verb> [args...]

with ``#`` starting a comment. Verbs: ``add <elev|main> <kg>``,
``remove <elev|main> <kg>``, ``door <open|close>``, ``call <msisdn>``,
``set <param> <value>``, ``tare``. Times must be non-decreasing.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .device import DeviceConfig, SensorFrame
from .errors import ScenarioParseError
from .link import DeterministicRng
from .sensing import (
    ADC_MAX,
    ADC_MIN,
    CornerGains,
    IDEAL_GAINS,
    bridge_raw,
    quantize_temp,
    round_half_away,
    weight_to_raw,
)
from .wire import is_valid_msisdn

PLATFORMS = ("elev", "main")

# Parameters a scenario may override mid-run via ``set``; the runner routes
# each one to the component that owns it.
SET_PARAMS = {
    "tick_ms": int,
    "sigma_counts": float,
    "loss_prob": float,
    "dup_prob": float,
    "latency_min_ms": int,
    "latency_max_ms": int,
    "call_setup_ms": int,
    "setpoint_c": float,
    "ambient_c": float,
    "k_closed_per_s": float,
    "k_open_per_s": float,
}


@dataclass(frozen=True, slots=True)
class ThermalParams:
    setpoint_c: float = -18.0
    ambient_c: float = 25.0
    k_closed_per_s: float = 0.01
    k_open_per_s: float = 0.05

    def __post_init__(self) -> None:
        if self.k_closed_per_s <= 0 or self.k_open_per_s <= 0:
            raise ValueError("thermal rates must be positive")


@dataclass(frozen=True, slots=True)
class NoiseParams:
    sigma_counts: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.sigma_counts < 0:
            raise ValueError("sigma_counts cannot be negative")


@dataclass(frozen=True, slots=True)
class PlantState:
    t_ms: int = 0
    elev_kg: float = 0.0
    main_kg: float = 0.0
    temp_c: float = -18.0
    door_open: bool = False
    distribution: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)


@dataclass(frozen=True, slots=True)
class ScenarioEvent:
    t_ms: int
    verb: str
    args: tuple = ()


# Side signals apply_event hands back for the runner to interpret.
@dataclass(frozen=True, slots=True)
class CallSignal:
    caller: str


@dataclass(frozen=True, slots=True)
class SetSignal:
    param: str
    value: float | int


@dataclass(frozen=True, slots=True)
class TareSignal:
    pass


@dataclass(frozen=True, slots=True)
class FloorWarning:
    """A remove asked for more than was present; the weight floored at zero."""

    platform: str
    requested_kg: float
    removed_kg: float


def step(state: PlantState, dt_ms: int, tp: ThermalParams) -> PlantState:
    """Advance temperature one Euler step; weights change only via events."""
    if dt_ms <= 0:
        raise ValueError("dt_ms must be positive")
    target = tp.ambient_c if state.door_open else tp.setpoint_c
    k = tp.k_open_per_s if state.door_open else tp.k_closed_per_s
    dt_s = dt_ms / 1000.0
    temp = state.temp_c + dt_s * (-k * (state.temp_c - target))
    return replace(state, t_ms=state.t_ms + dt_ms, temp_c=temp)


def apply_event(state: PlantState, ev: ScenarioEvent) -> tuple[PlantState, list]:
    """Apply one scenario event at the plant's current time.

    Stock and door events mutate the state directly; call, set, and tare
    are returned as signals because they belong to other components.
    """
    if ev.t_ms != state.t_ms:
        raise ValueError(f"event at t={ev.t_ms} applied at plant time t={state.t_ms}")
    signals: list = []
    if ev.verb == "add":
        platform, kg = ev.args
        if platform == "elev":
            state = replace(state, elev_kg=state.elev_kg + kg)
        else:
            state = replace(state, main_kg=state.main_kg + kg)
    elif ev.verb == "remove":
        platform, kg = ev.args
        present = state.elev_kg if platform == "elev" else state.main_kg
        removed = min(kg, present)
        if removed < kg:
            signals.append(FloorWarning(platform=platform, requested_kg=kg, removed_kg=removed))
        if platform == "elev":
            state = replace(state, elev_kg=present - removed)
        else:
            state = replace(state, main_kg=present - removed)
    elif ev.verb == "door":
        state = replace(state, door_open=(ev.args[0] == "open"))
    elif ev.verb == "call":
        signals.append(CallSignal(caller=ev.args[0]))
    elif ev.verb == "set":
        signals.append(SetSignal(param=ev.args[0], value=ev.args[1]))
    elif ev.verb == "tare":
        signals.append(TareSignal())
    else:  # unreachable: parse rejects unknown verbs at load time
        raise ValueError(f"unknown scenario verb {ev.verb!r}")
    return state, signals


def sample(
    state: PlantState,
    cfg: DeviceConfig,
    rng: DeterministicRng,
    sigma_counts: float,
    gains: CornerGains = IDEAL_GAINS,
) -> SensorFrame:
    """Produce one sensor frame from the true state.

    Noise draws are taken in a fixed order (elevated channel, then main)
    and are consumed even at sigma zero, so toggling noise mid-run never
    shifts the stream for later frames.
    """
    elev_noise = rng.normal(sigma_counts)
    main_noise = rng.normal(sigma_counts)
    elev_raw = _clamp(weight_to_raw(state.elev_kg, cfg.elev_cal) + elev_noise)
    main_raw = _clamp(bridge_raw(state.main_kg, state.distribution, gains, cfg.main_cal) + main_noise)
    return SensorFrame(
        t_ms=state.t_ms,
        elev_raw=elev_raw,
        main_raw=main_raw,
        temp_c=quantize_temp(state.temp_c),
    )


def _clamp(noisy_counts: float) -> int:
    return max(ADC_MIN, min(ADC_MAX, round_half_away(noisy_counts)))


class Plant:
    """Stateful shell bundling true state, thermal model, and the noise stream."""

    def __init__(
        self,
        state: PlantState,
        thermal: ThermalParams | None = None,
        noise: NoiseParams | None = None,
        gains: CornerGains = IDEAL_GAINS,
    ):
        noise = noise or NoiseParams()
        self.state = state
        self.thermal = thermal or ThermalParams()
        self.gains = gains
        self.sigma_counts = noise.sigma_counts
        self._rng = DeterministicRng(noise.seed)

    def step(self, dt_ms: int) -> None:
        self.state = step(self.state, dt_ms, self.thermal)

    def apply_event(self, ev: ScenarioEvent) -> list:
        self.state, signals = apply_event(self.state, ev)
        return signals

    def sample(self, cfg: DeviceConfig) -> SensorFrame:
        return sample(self.state, cfg, self._rng, self.sigma_counts, self.gains)


def parse_scenario(text: str, source: str = "<scenario>") -> list[ScenarioEvent]:
    """Parse scenario text into validated events; every problem is a load-time error."""
    events: list[ScenarioEvent] = []
    last_t = -1
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if not tokens[0].startswith("t="):
            raise ScenarioParseError(line_no, f"expected 't=<ms>', got {tokens[0]!r}")
        try:
            t_ms = int(tokens[0][2:])
        except ValueError:
            raise ScenarioParseError(line_no, f"bad time {tokens[0][2:]!r}") from None
        if t_ms < 0:
            raise ScenarioParseError(line_no, "time cannot be negative")
        if t_ms < last_t:
            raise ScenarioParseError(line_no, f"time t={t_ms} decreases (previous was {last_t})")
        last_t = t_ms
        if len(tokens) < 2:
            raise ScenarioParseError(line_no, "missing verb")
        verb, args = tokens[1], tokens[2:]
        events.append(ScenarioEvent(t_ms=t_ms, verb=verb, args=_parse_args(line_no, verb, args)))
    return events


def load_scenario(path: str) -> list[ScenarioEvent]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario(fh.read(), source=path)


def _parse_args(line_no: int, verb: str, args: Sequence[str]) -> tuple:
    if verb in ("add", "remove"):
        if len(args) != 2:
            raise ScenarioParseError(line_no, f"{verb} needs '<elev|main> <kg>'")
        platform, kg_text = args
        if platform not in PLATFORMS:
            raise ScenarioParseError(line_no, f"unknown platform {platform!r}")
        try:
            kg = float(kg_text)
        except ValueError:
            raise ScenarioParseError(line_no, f"bad weight {kg_text!r}") from None
        if kg <= 0:
            raise ScenarioParseError(line_no, "weight must be positive")
        return (platform, kg)
    if verb == "door":
        if len(args) != 1 or args[0] not in ("open", "close"):
            raise ScenarioParseError(line_no, "door needs 'open' or 'close'")
        return (args[0],)
    if verb == "call":
        if len(args) != 1 or not is_valid_msisdn(args[0]):
            raise ScenarioParseError(line_no, "call needs a valid MSISDN (+ and 7-15 digits)")
        return (args[0],)
    if verb == "set":
        if len(args) != 2:
            raise ScenarioParseError(line_no, "set needs '<param> <value>'")
        param, value_text = args
        if param not in SET_PARAMS:
            raise ScenarioParseError(
                line_no, f"unknown parameter {param!r} (known: {', '.join(sorted(SET_PARAMS))})"
            )
        try:
            value = SET_PARAMS[param](value_text)
        except ValueError:
            raise ScenarioParseError(line_no, f"bad value {value_text!r} for {param}") from None
        return (param, value)
    if verb == "tare":
        if args:
            raise ScenarioParseError(line_no, "tare takes no arguments")
        return ()
    raise ScenarioParseError(line_no, f"unknown verb {verb!r}")
