"""CQI to achievable-rate mapping.

Uses the standard 15-entry 4-bit CQI spectral-efficiency table; one PRB is
180 kHz, so rate per PRB = 0.18 MHz x efficiency (bits/s/Hz) in Mbps.
"""

from __future__ import annotations

PRB_BANDWIDTH_MHZ = 0.18

# Spectral efficiency (bits/s/Hz) indexed by CQI 1..15.
CQI_EFFICIENCY = (
    0.1523,
    0.2344,
    0.3770,
    0.6016,
    0.8770,
    1.1758,
    1.4766,
    1.9141,
    2.4063,
    2.7305,
    3.0293,
    3.3223,
    3.9023,
    4.5234,
    5.5547,
)


def spectral_efficiency(avg_cqi: float) -> float:
    """Efficiency for a possibly fractional CQI, linearly interpolated."""
    if not (1 <= avg_cqi <= 15):
        raise ValueError(f"avg_cqi must be in [1, 15], got {avg_cqi}")
    lower = int(avg_cqi)
    if lower == 15:
        return CQI_EFFICIENCY[14]
    frac = avg_cqi - lower
    return CQI_EFFICIENCY[lower - 1] + frac * (CQI_EFFICIENCY[lower] - CQI_EFFICIENCY[lower - 1])


def slice_rate_per_prb(avg_cqi: float) -> float:
    """Achievable Mbps per PRB at the given average CQI."""
    return PRB_BANDWIDTH_MHZ * spectral_efficiency(avg_cqi)
