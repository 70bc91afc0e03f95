"""Binomial confidence intervals for the accuracy reporting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist


class InvalidCounts(ValueError):
    pass


@dataclass(frozen=True)
class CiResult:
    successes: int
    trials: int
    point_pct: float
    lo_pct: float
    hi_pct: float

    def to_json_dict(self) -> dict:
        return {
            "successes": self.successes,
            "trials": self.trials,
            "point_pct": self.point_pct,
            "lo_pct": self.lo_pct,
            "hi_pct": self.hi_pct,
        }


def wilson_ci(successes: int, trials: int, confidence: float = 0.95) -> CiResult:
    """Wilson score interval for a binomial proportion, in percent."""
    if trials < 1 or not (0 <= successes <= trials):
        raise InvalidCounts(f"need 0 <= successes <= trials, trials >= 1; got {successes}/{trials}")
    if not (0 < confidence < 1):
        raise InvalidCounts(f"confidence must be in (0, 1), got {confidence}")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    n = trials
    p = successes / n
    z2 = z * z
    denom = 1 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    lo = max(0.0, center - half)
    hi = min(1.0, center + half)
    return CiResult(
        successes=successes,
        trials=trials,
        point_pct=100.0 * p,
        lo_pct=100.0 * lo,
        hi_pct=100.0 * hi,
    )
