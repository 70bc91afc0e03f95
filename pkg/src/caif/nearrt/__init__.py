"""Near-RT RIC layer: A1 mediator, KPIMON metrics DB, SLA Slice control
loops and RC actuation."""

from caif.nearrt.controller import (
    DEFAULT_DEADBAND_FRAC,
    DEFAULT_GUARD_BAND_PTS,
    DEFAULT_K_P,
    DEFAULT_STEP_CAP_PTS,
    ControllerState,
    GainConfig,
    control_step,
)
from caif.nearrt.metrics import MetricsDb
from caif.nearrt.xapps import (
    STALE_TICKS,
    AlreadyTerminal,
    ControlLoop,
    MalformedPolicy,
    PolicyRegistry,
    UnknownPolicy,
)

__all__ = [
    "AlreadyTerminal",
    "ControlLoop",
    "ControllerState",
    "DEFAULT_DEADBAND_FRAC",
    "DEFAULT_GUARD_BAND_PTS",
    "DEFAULT_K_P",
    "DEFAULT_STEP_CAP_PTS",
    "GainConfig",
    "MalformedPolicy",
    "MetricsDb",
    "PolicyRegistry",
    "STALE_TICKS",
    "UnknownPolicy",
    "control_step",
]
