"""Per-second closed-loop ratio computation for the SLA Slice xApp.

A proportional step controller with deadband: the relative error between
target G and measured throughput T drives a bounded adjustment of the
slice's maximum PRB ratio; the minimum ratio trails the maximum by a fixed
guard band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from caif.nonrt.rapps import A1Policy
from caif.sim.types import RrmPolicyRatio

DEFAULT_K_P = 0.5
DEFAULT_DEADBAND_FRAC = 0.05
DEFAULT_STEP_CAP_PTS = 10
DEFAULT_GUARD_BAND_PTS = 10


@dataclass
class ControllerState:
    policy: A1Policy
    current_ratio: RrmPolicyRatio
    k_p: float = DEFAULT_K_P
    deadband_frac: float = DEFAULT_DEADBAND_FRAC
    step_cap_pts: int = DEFAULT_STEP_CAP_PTS
    guard_band_pts: int = DEFAULT_GUARD_BAND_PTS

    def __post_init__(self) -> None:
        if self.k_p <= 0:
            raise ValueError("k_p must be positive")
        if not (0 <= self.deadband_frac < 1):
            raise ValueError("deadband_frac must be in [0, 1)")
        if self.step_cap_pts < 1:
            raise ValueError("step_cap_pts must be >= 1")


@dataclass(frozen=True)
class GainConfig:
    k_p: float = DEFAULT_K_P
    deadband_frac: float = DEFAULT_DEADBAND_FRAC
    step_cap_pts: int = DEFAULT_STEP_CAP_PTS
    guard_band_pts: int = DEFAULT_GUARD_BAND_PTS


def control_step(state: ControllerState, measured_mbps: float) -> RrmPolicyRatio | None:
    """One control decision; None means the error is inside the deadband.

    e = (G - T) / G
    delta = clamp(round(k_p * e * 100), -step_cap, +step_cap) ratio points
    max' = clamp(max + delta, 0, 100); min' = max(0, max' - guard_band)
    """
    if measured_mbps < 0:
        raise ValueError("measured throughput must be >= 0")
    goal = state.policy.target_throughput_mbps
    if goal <= 0:
        raise ValueError("policy target must be positive")
    error = (goal - measured_mbps) / goal
    if abs(error) <= state.deadband_frac:
        return None
    delta = math.floor(state.k_p * error * 100 + 0.5)
    delta = max(-state.step_cap_pts, min(state.step_cap_pts, delta))
    new_max = max(0, min(100, state.current_ratio.max_ratio_pct + delta))
    new_min = max(0, new_max - state.guard_band_pts)
    return RrmPolicyRatio(min_ratio_pct=new_min, max_ratio_pct=new_max)
