"""Discrete-time RAN simulator: PRB allocation under two-level RRM policy
ratios, CQI-driven rate model, per-tick KPM reporting."""

from caif.sim.allocator import allocate_prb, ratio_caps
from caif.sim.cqi import CQI_EFFICIENCY, PRB_BANDWIDTH_MHZ, slice_rate_per_prb, spectral_efficiency
from caif.sim.scenario_io import (
    BUNDLED_SCENARIO,
    ScenarioParseError,
    load_bundled_scenario,
    load_scenario,
)
from caif.sim.simulator import InvariantViolation, RanSimulator
from caif.sim.types import (
    Cell,
    KpmReport,
    Mobility,
    RrmPolicyRatio,
    Scenario,
    ServiceType,
    SliceConfig,
    UeGroup,
)

__all__ = [
    "BUNDLED_SCENARIO",
    "CQI_EFFICIENCY",
    "Cell",
    "InvariantViolation",
    "KpmReport",
    "Mobility",
    "PRB_BANDWIDTH_MHZ",
    "RanSimulator",
    "RrmPolicyRatio",
    "Scenario",
    "ScenarioParseError",
    "ServiceType",
    "SliceConfig",
    "UeGroup",
    "allocate_prb",
    "load_bundled_scenario",
    "load_scenario",
    "ratio_caps",
    "slice_rate_per_prb",
    "spectral_efficiency",
]
