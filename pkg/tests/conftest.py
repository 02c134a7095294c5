from __future__ import annotations

import pytest

from coldstock.device import DeviceConfig, SensorFrame
from coldstock.sensing import quantize_temp, weight_to_raw

OWNER = "+639170000001"
DEVICE = "+639170000000"
STRANGER = "+639998887777"


@pytest.fixture
def cfg() -> DeviceConfig:
    return DeviceConfig(owner_msisdn=OWNER, authorized=frozenset({OWNER}))


def make_frame(
    cfg: DeviceConfig,
    t_ms: int,
    elev_kg: float = 0.0,
    main_kg: float = 0.0,
    temp_c: float = -18.0,
) -> SensorFrame:
    """Noiseless frame for the given true weights, through the real transforms."""
    return SensorFrame(
        t_ms=t_ms,
        elev_raw=weight_to_raw(elev_kg, cfg.elev_cal),
        main_raw=weight_to_raw(main_kg, cfg.main_cal),
        temp_c=quantize_temp(temp_c),
    )
