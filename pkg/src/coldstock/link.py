"""Deterministic simulated cellular link and the event scheduler that drives it.

SMS submissions suffer seeded loss, uniform latency, and duplication; call
signaling (RING) is reliable and only delayed by a fixed setup time, since
the trigger path is treated as dependable while SMS is the flaky leg.
Payloads are never corrupted in transit, so integrity failures can only be
injected at the decoder.

Everything is single-threaded: the scheduler dispatches callbacks serially
in timestamp order, ties broken first-in first-out.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from typing import Callable

from .wire import SmsMessage


class DeterministicRng:
    """Seeded random stream with explicitly pinned derivations.

    Only ``random.Random.random()`` is consumed (its sequence for a given
    seed is stable across interpreter releases); uniform integers and
    normal deviates are derived from it with fixed formulas, so a replay
    with the same seed yields the same draws on any build.
    """

    def __init__(self, seed: int):
        self._uniform = random.Random(seed).random

    def chance(self, probability: float) -> bool:
        return self._uniform() < probability

    def uniform_int(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], inclusive."""
        if hi < lo:
            raise ValueError("empty range")
        return min(hi, lo + int(self._uniform() * (hi - lo + 1)))

    def normal(self, sigma: float) -> float:
        """Box-Muller normal deviate with mean 0; always consumes two draws."""
        u1 = 1.0 - self._uniform()
        u2 = self._uniform()
        return sigma * math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


class EventScheduler:
    """Discrete-event clock in simulated milliseconds."""

    def __init__(self):
        self.now_ms = 0
        self._tie = 0
        self._queue: list[tuple[int, int, Callable[[], None]]] = []

    def schedule_at(self, t_ms: int, fn: Callable[[], None]) -> None:
        """Queue ``fn`` at t_ms; events in the past run at the current time."""
        self._tie += 1
        heapq.heappush(self._queue, (max(t_ms, self.now_ms), self._tie, fn))

    def run_until(self, end_ms: int) -> None:
        """Dispatch every event with timestamp <= end_ms, then settle the clock at end_ms."""
        while self._queue and self._queue[0][0] <= end_ms:
            t_ms, _, fn = heapq.heappop(self._queue)
            self.now_ms = t_ms
            fn()
        self.now_ms = max(self.now_ms, end_ms)

    def pending(self) -> int:
        return len(self._queue)


@dataclass(frozen=True, slots=True)
class LinkParams:
    latency_ms_min: int = 500
    latency_ms_max: int = 1500
    loss_prob: float = 0.0
    dup_prob: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.latency_ms_min < 0 or self.latency_ms_max < self.latency_ms_min:
            raise ValueError("latency bounds must satisfy 0 <= min <= max")
        for name, p in (("loss_prob", self.loss_prob), ("dup_prob", self.dup_prob)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")


@dataclass(frozen=True, slots=True)
class Delivery:
    """One scheduled handoff of a submitted SMS."""

    at_ms: int
    duplicate: bool


@dataclass(frozen=True, slots=True)
class DeadLetter:
    t_ms: int
    kind: str  # "sms" or "call"
    sender: str
    recipient: str
    payload: str = ""


@dataclass(slots=True)
class _Subscriber:
    on_sms: Callable[[int, SmsMessage], None] | None = None
    on_ring: Callable[[int, str], None] | None = None


class CellularLink:
    """Simulated SMS/voice bearer connecting the device to the outside world.

    Subscribers register their MSISDN with callbacks; deliveries to numbers
    nobody registered go to ``dead_letters``. Every SMS that reaches a
    recipient is appended to ``sms_trace`` as ``(t_ms, sender, recipient,
    payload)`` in delivery order.
    """

    def __init__(self, params: LinkParams, scheduler: EventScheduler, call_setup_ms: int = 2000):
        self.params = params
        self.scheduler = scheduler
        self.call_setup_ms = call_setup_ms
        self.sms_trace: list[tuple[int, str, str, str]] = []
        self.dead_letters: list[DeadLetter] = []
        self._rng = DeterministicRng(params.seed)
        self._subscribers: dict[str, _Subscriber] = {}

    def register(
        self,
        msisdn: str,
        on_sms: Callable[[int, SmsMessage], None] | None = None,
        on_ring: Callable[[int, str], None] | None = None,
    ) -> None:
        self._subscribers[msisdn] = _Subscriber(on_sms=on_sms, on_ring=on_ring)

    def submit(self, msg: SmsMessage) -> list[Delivery]:
        """Submit one SMS; returns the schedule the seeded generator produced.

        Draw order is fixed: loss, then latency, then duplication, then the
        duplicate's latency. A lost message consumes only the loss draw.
        """
        p = self.params
        if self._rng.chance(p.loss_prob):
            return []
        deliveries = [
            Delivery(
                at_ms=msg.submitted_at_ms + self._rng.uniform_int(p.latency_ms_min, p.latency_ms_max),
                duplicate=False,
            )
        ]
        if self._rng.chance(p.dup_prob):
            deliveries.append(
                Delivery(
                    at_ms=msg.submitted_at_ms + self._rng.uniform_int(p.latency_ms_min, p.latency_ms_max),
                    duplicate=True,
                )
            )
        for d in deliveries:
            self.scheduler.schedule_at(d.at_ms, lambda msg=msg: self._deliver_sms(msg))
        return deliveries

    def place_call(self, caller: str, callee: str) -> None:
        """Schedule a RING at the callee after call setup; calls are never lost."""
        sub = self._subscribers.get(callee)
        if sub is None or sub.on_ring is None:
            self.dead_letters.append(
                DeadLetter(t_ms=self.scheduler.now_ms, kind="call", sender=caller, recipient=callee)
            )
            return
        ring_at = self.scheduler.now_ms + self.call_setup_ms
        self.scheduler.schedule_at(ring_at, lambda: sub.on_ring(self.scheduler.now_ms, caller))

    def _deliver_sms(self, msg: SmsMessage) -> None:
        now = self.scheduler.now_ms
        sub = self._subscribers.get(msg.recipient)
        if sub is None or sub.on_sms is None:
            self.dead_letters.append(
                DeadLetter(
                    t_ms=now, kind="sms", sender=msg.sender, recipient=msg.recipient, payload=msg.payload
                )
            )
            return
        self.sms_trace.append((now, msg.sender, msg.recipient, msg.payload))
        sub.on_sms(now, msg)
