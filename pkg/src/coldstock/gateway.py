"""Phone-side backend: ingests delivered SMS, keeps the inventory truth.

Every delivered message becomes exactly one append-only log entry (stat,
alert, duplicate, or reject); nothing is silently dropped. Deduplication
keys on (sender, sequence) because the wire format carries no message id,
and the latest snapshot follows the highest accepted status sequence, not
arrival order, so reordered deliveries cannot roll it back.

The log file holds one JSON object per line ``{"id","tMs","kind","payload"}``
and is flushed before ingest returns; on startup the entire state is
rebuilt from the log alone, tolerating a torn final line.

Reads may be concurrent; ingest and trigger are serialized by one lock.
"""

from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass
from typing import IO, Callable

from .errors import ConfigError
from .link import CellularLink
from .wire import DecodeError, SmsMessage, decode_alert, decode_status

log = logging.getLogger(__name__)

KIND_STAT = "stat"
KIND_ALERT = "alert"
KIND_CHECK = "check_requested"
KIND_DUPLICATE = "duplicate"
KIND_REJECT = "reject"


@dataclass(frozen=True, slots=True)
class InventoryRecord:
    device_msisdn: str
    seq: int
    received_at_ms: int
    elev_kg: float
    main_kg: float
    count_elev: int
    count_main: int
    temp_c: float

    def to_json(self) -> dict:
        return {
            "deviceMsisdn": self.device_msisdn,
            "seq": self.seq,
            "receivedAtMs": self.received_at_ms,
            "elevKg": self.elev_kg,
            "mainKg": self.main_kg,
            "cElev": self.count_elev,
            "cMain": self.count_main,
            "tempC": self.temp_c,
        }

    @classmethod
    def from_json(cls, data: dict) -> "InventoryRecord":
        return cls(
            device_msisdn=data["deviceMsisdn"],
            seq=data["seq"],
            received_at_ms=data["receivedAtMs"],
            elev_kg=data["elevKg"],
            main_kg=data["mainKg"],
            count_elev=data["cElev"],
            count_main=data["cMain"],
            temp_c=data["tempC"],
        )


@dataclass(frozen=True, slots=True)
class AlertRecord:
    device_msisdn: str
    seq: int
    received_at_ms: int
    platform: str
    kg: float
    limit_kg: float
    acknowledged: bool = False

    def to_json(self) -> dict:
        return {
            "deviceMsisdn": self.device_msisdn,
            "seq": self.seq,
            "receivedAtMs": self.received_at_ms,
            "platform": self.platform,
            "kg": self.kg,
            "limitKg": self.limit_kg,
            "acknowledged": self.acknowledged,
        }

    @classmethod
    def from_json(cls, data: dict) -> "AlertRecord":
        return cls(
            device_msisdn=data["deviceMsisdn"],
            seq=data["seq"],
            received_at_ms=data["receivedAtMs"],
            platform=data["platform"],
            kg=data["kg"],
            limit_kg=data["limitKg"],
            acknowledged=data["acknowledged"],
        )


@dataclass(frozen=True, slots=True)
class EventLogEntry:
    id: int
    t_ms: int
    kind: str
    payload: dict

    def to_json(self) -> dict:
        return {"id": self.id, "tMs": self.t_ms, "kind": self.kind, "payload": self.payload}


class Gateway:
    """Single-device inventory backend over a simulated cellular link."""

    def __init__(
        self,
        own_msisdn: str,
        device_msisdn: str | None = None,
        log_path: str | None = None,
        link: CellularLink | None = None,
        clock: Callable[[], int] | None = None,
    ):
        self.own_msisdn = own_msisdn
        self.device_msisdn = device_msisdn
        self.link = link
        self.clock = clock
        self._lock = threading.Lock()
        self._entries: list[EventLogEntry] = []
        self._seen: set[tuple[str, int]] = set()
        self._snapshot: InventoryRecord | None = None
        self._alerts: list[tuple[int, AlertRecord]] = []  # (log id, record)
        self._log_path = log_path
        self._log_file: IO[str] | None = None
        if log_path is not None:
            self._replay_log(log_path)
            self._log_file = open(log_path, "a", encoding="utf-8")

    # -- ingest path ---------------------------------------------------

    def ingest_sms(self, msg: SmsMessage, received_at_ms: int) -> EventLogEntry:
        """Turn one delivered SMS into exactly one log entry; never raises."""
        with self._lock:
            return self._ingest_locked(msg, received_at_ms)

    def _ingest_locked(self, msg: SmsMessage, received_at_ms: int) -> EventLogEntry:
        try:
            if msg.payload.startswith("ALRT"):
                wa = decode_alert(msg.payload)
                seq = wa.seq
                record: dict = AlertRecord(
                    device_msisdn=msg.sender,
                    seq=wa.seq,
                    received_at_ms=received_at_ms,
                    platform=wa.platform,
                    kg=wa.kg,
                    limit_kg=wa.limit_kg,
                ).to_json()
                kind = KIND_ALERT
            else:
                ws = decode_status(msg.payload)
                seq = ws.seq
                record = InventoryRecord(
                    device_msisdn=msg.sender,
                    seq=ws.seq,
                    received_at_ms=received_at_ms,
                    elev_kg=ws.elev_kg,
                    main_kg=ws.main_kg,
                    count_elev=ws.count_elev,
                    count_main=ws.count_main,
                    temp_c=ws.temp_c,
                ).to_json()
                kind = KIND_STAT
        except DecodeError as exc:
            return self._append(
                received_at_ms,
                KIND_REJECT,
                {"from": msg.sender, "errorKind": exc.kind, "payload": msg.payload},
            )
        if (msg.sender, seq) in self._seen:
            return self._append(
                received_at_ms, KIND_DUPLICATE, {"deviceMsisdn": msg.sender, "seq": seq}
            )
        entry = self._append(received_at_ms, kind, record)
        self._apply_accepted(entry)
        return entry

    def _apply_accepted(self, entry: EventLogEntry) -> None:
        payload = entry.payload
        self._seen.add((payload["deviceMsisdn"], payload["seq"]))
        if entry.kind == KIND_STAT:
            record = InventoryRecord.from_json(payload)
            if self._snapshot is None or record.seq > self._snapshot.seq:
                self._snapshot = record
        elif entry.kind == KIND_ALERT:
            self._alerts.append((entry.id, AlertRecord.from_json(payload)))

    def trigger_check(self) -> int:
        """Call the device so it texts back a fresh status; returns the request id."""
        with self._lock:
            if self.device_msisdn is None:
                raise ConfigError("device MSISDN is not configured")
            if self.link is None or self.clock is None:
                raise ConfigError("gateway is not attached to a link")
            self.link.place_call(self.own_msisdn, self.device_msisdn)
            entry = self._append(
                self.clock(),
                KIND_CHECK,
                {"from": self.own_msisdn, "to": self.device_msisdn},
            )
            return entry.id

    # -- queries ---------------------------------------------------------

    def query_latest(self) -> InventoryRecord | None:
        return self._snapshot

    def query_alerts(self, since_id: int = 0) -> list[tuple[int, AlertRecord]]:
        return [(eid, rec) for eid, rec in self._alerts if eid > since_id]

    def query_events(self, after_id: int = 0, limit: int = 100) -> list[EventLogEntry]:
        if limit <= 0:
            return []
        # entries are dense from id 1, so slice instead of scanning
        start = max(after_id, 0)
        return self._entries[start : start + limit]

    # -- persistence -----------------------------------------------------

    def _append(self, t_ms: int, kind: str, payload: dict) -> EventLogEntry:
        entry = EventLogEntry(id=len(self._entries) + 1, t_ms=t_ms, kind=kind, payload=payload)
        if self._log_file is not None:
            self._log_file.write(json.dumps(entry.to_json(), separators=(",", ":")) + "\n")
            self._log_file.flush()
        self._entries.append(entry)
        return entry

    def _replay_log(self, path: str) -> None:
        """Rebuild snapshot, alerts, and dedup state purely from the log file."""
        try:
            with open(path, "r", encoding="utf-8") as fh:
                lines = fh.readlines()
        except FileNotFoundError:
            return
        keep = len(lines)
        for i, line in enumerate(lines):
            try:
                data = json.loads(line)
                entry = EventLogEntry(
                    id=data["id"], t_ms=data["tMs"], kind=data["kind"], payload=data["payload"]
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                if i == len(lines) - 1:
                    log.warning("%s: dropping torn final line: %s", path, exc)
                    keep = i
                    break
                raise ValueError(f"{path}: corrupt log entry at line {i + 1}") from exc
            if entry.id != len(self._entries) + 1:
                raise ValueError(f"{path}: log ids are not dense at line {i + 1}")
            self._entries.append(entry)
            if entry.kind in (KIND_STAT, KIND_ALERT):
                self._apply_accepted(entry)
            elif entry.kind == KIND_DUPLICATE:
                self._seen.add((entry.payload["deviceMsisdn"], entry.payload["seq"]))
        if keep < len(lines):
            with open(path, "w", encoding="utf-8") as fh:
                fh.writelines(lines[:keep])

    def close(self) -> None:
        if self._log_file is not None:
            self._log_file.close()
            self._log_file = None
