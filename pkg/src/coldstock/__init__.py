"""coldstock: desk-scale simulation of a freezer inventory monitor.

Pipeline: a plant simulator produces raw sensor frames, a device
controller turns them into status and alert SMS over a simulated cellular
link, and a gateway ingests the messages into an append-only event log
served over HTTP to the web client.
"""

from .device import Controller, DeviceConfig, DeviceState, SensorFrame
from .gateway import AlertRecord, Gateway, InventoryRecord
from .link import CellularLink, EventScheduler, LinkParams
from .plant import NoiseParams, Plant, PlantState, ThermalParams, parse_scenario
from .sensing import (
    CalibrationParams,
    CornerGains,
    ELEV_BAR_CAL,
    MAIN_BRIDGE_CAL,
    fit_calibration,
    raw_to_weight,
    weight_to_raw,
)
from .sim import RunReport, Simulation, run_simulation
from .wire import SmsMessage, WireAlert, WireStatus, decode_alert, decode_status

__version__ = "0.1.0"

__all__ = [
    "AlertRecord",
    "CalibrationParams",
    "CellularLink",
    "Controller",
    "CornerGains",
    "DeviceConfig",
    "DeviceState",
    "ELEV_BAR_CAL",
    "EventScheduler",
    "Gateway",
    "InventoryRecord",
    "LinkParams",
    "MAIN_BRIDGE_CAL",
    "NoiseParams",
    "Plant",
    "PlantState",
    "RunReport",
    "SensorFrame",
    "Simulation",
    "SmsMessage",
    "ThermalParams",
    "WireAlert",
    "WireStatus",
    "decode_alert",
    "decode_status",
    "fit_calibration",
    "parse_scenario",
    "raw_to_weight",
    "run_simulation",
    "weight_to_raw",
]
