"""Lockstep simulation wiring plant, device, link, and gateway on one clock.

Ordering at equal timestamps is first-scheduled first-served: scenario
events are queued at construction, so an ``add`` at t runs before the
sensor tick at the same t and the tick's frame already sees the new
weight. The device samples every ``tick_ms`` (default one second, the
sampling cadence is a scenario-tunable choice).

A single master seed fans out to the link stream (seed) and the sensor
noise stream (seed + 1), so one ``--seed`` value pins the whole run.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, replace
from pathlib import Path

from .device import Controller, DeviceConfig, Hangup, SendSms
from .gateway import Gateway, InventoryRecord
from .link import CellularLink, EventScheduler, LinkParams
from .plant import (
    CallSignal,
    FloorWarning,
    NoiseParams,
    Plant,
    PlantState,
    ScenarioEvent,
    SetSignal,
    TareSignal,
    ThermalParams,
)
from .wire import SmsMessage

DEVICE_MSISDN = "+639170000000"
OWNER_MSISDN = "+639170000001"

DEFAULT_TICK_MS = 1000
DEFAULT_DRAIN_MS = 10_000


@dataclass(slots=True)
class RunReport:
    frames_processed: int = 0
    sms_submitted: int = 0
    sms_delivered: int = 0
    alerts_emitted: int = 0
    checks_served: int = 0
    final_snapshot: InventoryRecord | None = None

    def to_json(self) -> dict:
        return {
            "framesProcessed": self.frames_processed,
            "smsSubmitted": self.sms_submitted,
            "smsDelivered": self.sms_delivered,
            "alertsEmitted": self.alerts_emitted,
            "checksServed": self.checks_served,
            "finalSnapshot": self.final_snapshot.to_json() if self.final_snapshot else None,
        }


class Simulation:
    """Owns every component of one run; advance with run_until or run."""

    def __init__(
        self,
        events: list[ScenarioEvent],
        seed: int = 0,
        cfg: DeviceConfig | None = None,
        log_path: str | None = None,
        tick_ms: int = DEFAULT_TICK_MS,
        link_params: LinkParams | None = None,
        thermal: ThermalParams | None = None,
        sigma_counts: float = 0.0,
    ):
        self.events = sorted(events, key=lambda ev: ev.t_ms)  # stable: keeps file order at equal t
        self.cfg = cfg or DeviceConfig(
            owner_msisdn=OWNER_MSISDN, authorized=frozenset({OWNER_MSISDN})
        )
        self.tick_ms = tick_ms
        self.report = RunReport()
        self.lock = threading.RLock()

        self.scheduler = EventScheduler()
        self.link = CellularLink(
            params=link_params or LinkParams(seed=seed),
            scheduler=self.scheduler,
        )
        self.plant = Plant(
            state=PlantState(),
            thermal=thermal or ThermalParams(),
            noise=NoiseParams(sigma_counts=sigma_counts, seed=seed + 1),
        )
        self.device = Controller(cfg=self.cfg)
        self.gateway = Gateway(
            own_msisdn=self.cfg.owner_msisdn,
            device_msisdn=DEVICE_MSISDN,
            log_path=log_path,
            link=self.link,
            clock=lambda: self.scheduler.now_ms,
        )
        self.floor_warnings: list[FloorWarning] = []

        self.link.register(DEVICE_MSISDN, on_ring=self._on_device_ring)
        self.link.register(self.cfg.owner_msisdn, on_sms=self._count_delivery)

        for ev in self.events:
            self.scheduler.schedule_at(ev.t_ms, lambda ev=ev: self._apply_scenario_event(ev))
        self.scheduler.schedule_at(0, self._tick)

        self.last_event_ms = self.events[-1].t_ms if self.events else 0

    # -- event plumbing --------------------------------------------------

    def _advance_plant(self) -> None:
        dt = self.scheduler.now_ms - self.plant.state.t_ms
        if dt > 0:
            self.plant.step(dt)

    def _apply_scenario_event(self, ev: ScenarioEvent) -> None:
        self._advance_plant()
        for signal in self.plant.apply_event(ev):
            if isinstance(signal, CallSignal):
                self.link.place_call(signal.caller, DEVICE_MSISDN)
            elif isinstance(signal, SetSignal):
                self._apply_set(signal.param, signal.value)
            elif isinstance(signal, TareSignal):
                self.cfg = replace(
                    self.cfg,
                    elev_tare_kg=self.plant.state.elev_kg,
                    main_tare_kg=self.plant.state.main_kg,
                )
                self.device.cfg = self.cfg
            elif isinstance(signal, FloorWarning):
                self.floor_warnings.append(signal)

    def _apply_set(self, param: str, value: float | int) -> None:
        if param == "tick_ms":
            self.tick_ms = int(value)
        elif param == "sigma_counts":
            self.plant.sigma_counts = float(value)
        elif param == "call_setup_ms":
            self.link.call_setup_ms = int(value)
        elif param in ("loss_prob", "dup_prob", "latency_min_ms", "latency_max_ms"):
            p = self.link.params
            self.link.params = LinkParams(
                latency_ms_min=int(value) if param == "latency_min_ms" else p.latency_ms_min,
                latency_ms_max=int(value) if param == "latency_max_ms" else p.latency_ms_max,
                loss_prob=float(value) if param == "loss_prob" else p.loss_prob,
                dup_prob=float(value) if param == "dup_prob" else p.dup_prob,
                seed=p.seed,
            )
        else:  # thermal parameters
            self.plant.thermal = replace(self.plant.thermal, **{param: float(value)})

    def _tick(self) -> None:
        self._advance_plant()
        frame = self.plant.sample(self.cfg)
        self.report.frames_processed += 1
        self._dispatch_actions(self.device.tick(frame), is_status=False)
        self.scheduler.schedule_at(self.scheduler.now_ms + self.tick_ms, self._tick)

    def _on_device_ring(self, t_ms: int, caller: str) -> None:
        self._dispatch_actions(self.device.ring(caller), is_status=True)

    def _dispatch_actions(self, actions, is_status: bool) -> None:
        for action in actions:
            if isinstance(action, Hangup):
                continue
            assert isinstance(action, SendSms)
            if is_status:
                self.report.checks_served += 1
            else:
                self.report.alerts_emitted += 1
            msg = SmsMessage(
                sender=DEVICE_MSISDN,
                recipient=action.to,
                payload=action.payload,
                submitted_at_ms=self.scheduler.now_ms,
            )
            self.report.sms_submitted += 1
            self.link.submit(msg)

    def _count_delivery(self, t_ms: int, msg) -> None:
        self.report.sms_delivered += 1
        self.gateway.ingest_sms(msg, received_at_ms=t_ms)

    # -- driving ---------------------------------------------------------

    def request_check(self) -> int:
        """Thread-safe check trigger used by the HTTP API in serve mode."""
        with self.lock:
            return self.gateway.trigger_check()

    def run_until(self, end_ms: int) -> None:
        with self.lock:
            self.scheduler.run_until(end_ms)

    def run(self, drain_ms: int = DEFAULT_DRAIN_MS) -> RunReport:
        """Run to the last scenario event plus a drain window; returns the report."""
        self.run_until(self.last_event_ms + drain_ms)
        self.report.final_snapshot = self.gateway.query_latest()
        return self.report

    def write_sms_trace(self, path: str) -> None:
        """One delivered message per line: ``<tMs> <from> <to> <payload>``."""
        with open(path, "w", encoding="utf-8") as fh:
            for t_ms, sender, recipient, payload in self.link.sms_trace:
                fh.write(f"{t_ms} {sender} {recipient} {payload}\n")

    def close(self) -> None:
        self.gateway.close()


def run_simulation(
    events: list[ScenarioEvent],
    seed: int,
    out_dir: str | None,
    drain_ms: int = DEFAULT_DRAIN_MS,
    sms_trace_path: str | None = None,
    **kwargs,
) -> RunReport:
    """Convenience wrapper used by the CLI: run, write artifacts, report."""
    log_path = None
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        log_path = str(out / "event_log.ndjson")
        Path(log_path).unlink(missing_ok=True)  # each run starts a fresh log
    sim = Simulation(events, seed=seed, log_path=log_path, **kwargs)
    try:
        report = sim.run(drain_ms=drain_ms)
        if out_dir is not None:
            trace = sms_trace_path or str(Path(out_dir) / "sms_trace.txt")
            sim.write_sms_trace(trace)
            with open(Path(out_dir) / "report.json", "w", encoding="utf-8") as fh:
                json.dump(report.to_json(), fh, indent=2)
                fh.write("\n")
        elif sms_trace_path is not None:
            sim.write_sms_trace(sms_trace_path)
    finally:
        sim.close()
    return report
