"""Scenario and measurement types for the discrete-time RAN simulator."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class ServiceType(str, Enum):
    EMBB = "eMBB"
    MMTC = "mMTC"


class Mobility(str, Enum):
    FIXED = "Fixed"
    RANDOM_WALK = "RandomWalk"


@dataclass
class RrmPolicyRatio:
    """Per-slice guaranteed/maximum share of a cell's PRBs, in percent."""

    min_ratio_pct: int
    max_ratio_pct: int

    def validate(self) -> None:
        if not (0 <= self.min_ratio_pct <= self.max_ratio_pct <= 100):
            raise ValueError(
                f"require 0 <= min <= max <= 100, got ({self.min_ratio_pct}, {self.max_ratio_pct})"
            )


@dataclass
class SliceConfig:
    slice_id: int
    service: ServiceType
    ratio: RrmPolicyRatio


@dataclass
class Cell:
    cell_id: int
    total_prb: int
    slices: list[SliceConfig]
    initial_ue_count: int | None = None  # observed attachment count, informational

    def validate(self) -> None:
        if self.total_prb <= 0:
            raise ValueError(f"cell {self.cell_id}: total_prb must be positive")
        ids = [s.slice_id for s in self.slices]
        if len(ids) != len(set(ids)):
            raise ValueError(f"cell {self.cell_id}: duplicate slice ids")
        for s in self.slices:
            s.ratio.validate()
        if sum(s.ratio.min_ratio_pct for s in self.slices) > 100:
            raise ValueError(f"cell {self.cell_id}: sum of min ratios exceeds 100")


@dataclass
class UeGroup:
    name: str
    mobility: Mobility
    count: int
    cell_id: int
    slice_id: int
    qos_id: int
    gbr: bool
    per_ue_target_mbps: float
    cqi_mean: int
    cqi_jitter: int = 0

    def validate(self) -> None:
        if self.count <= 0:
            raise ValueError(f"ue group {self.name}: count must be positive")
        if not (1 <= self.cqi_mean <= 15):
            raise ValueError(f"ue group {self.name}: cqi_mean must be in [1, 15]")
        if self.cqi_jitter < 0:
            raise ValueError(f"ue group {self.name}: cqi_jitter must be >= 0")


@dataclass
class Scenario:
    cells: list[Cell]
    ue_groups: list[UeGroup]
    tick_s: float = 1.0
    sim_seed: int = 0
    demand_jitter_frac: float = 0.05

    def validate(self) -> None:
        if not self.cells:
            raise ValueError("scenario must define at least one cell")
        for cell in self.cells:
            cell.validate()
        scopes = {
            (cell.cell_id, s.slice_id) for cell in self.cells for s in cell.slices
        }
        for group in self.ue_groups:
            group.validate()
            if (group.cell_id, group.slice_id) not in scopes:
                raise ValueError(
                    f"ue group {group.name}: references unknown scope "
                    f"(cell {group.cell_id}, slice {group.slice_id})"
                )

    def cell(self, cell_id: int) -> Cell:
        for c in self.cells:
            if c.cell_id == cell_id:
                return c
        raise KeyError(f"unknown cell {cell_id}")


@dataclass(frozen=True)
class KpmReport:
    """Per-tick, per-slice key performance measurement record."""

    tick: int
    cell_id: int
    slice_id: int
    dl_throughput_mbps: float
    prb_used: int
    avg_cqi: float

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "tick": self.tick,
            "cell_id": self.cell_id,
            "slice_id": self.slice_id,
            "dl_throughput_mbps": self.dl_throughput_mbps,
            "prb_used": self.prb_used,
            "avg_cqi": self.avg_cqi,
        }


@dataclass
class SliceState:
    """Mutable per-(cell, slice) runtime state."""

    config: SliceConfig
    ratio: RrmPolicyRatio = field(init=False)

    def __post_init__(self) -> None:
        self.ratio = RrmPolicyRatio(
            self.config.ratio.min_ratio_pct, self.config.ratio.max_ratio_pct
        )
