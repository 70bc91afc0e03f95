"""Discrete-time (1 s tick) multi-cell, multi-slice RAN simulator.

Per tick: sample each UE group's CQI, aggregate per-slice demand and
average CQI, allocate PRBs under the live RRM policy ratios, and emit one
KpmReport per (cell, slice) with throughput = min(demand, prb x rate).
"""

from __future__ import annotations

import random
import threading

from caif.sim.allocator import allocate_prb
from caif.sim.cqi import slice_rate_per_prb
from caif.sim.types import KpmReport, RrmPolicyRatio, Scenario, UeGroup


class InvariantViolation(ValueError):
    pass


class RanSimulator:
    """Owns the live RAN state; a single writer advances the tick loop.

    Ratio-control requests are validated immediately and take effect from
    the next tick; they persist until overwritten.
    """

    def __init__(self, scenario: Scenario, seed: int | None = None):
        scenario.validate()
        self.scenario = scenario
        self._rng = random.Random(scenario.sim_seed if seed is None else seed)
        self._lock = threading.Lock()
        self.tick_count = 0
        # live ratios start from the scenario's configured values
        self._ratios: dict[tuple[int, int], RrmPolicyRatio] = {
            (cell.cell_id, s.slice_id): RrmPolicyRatio(
                s.ratio.min_ratio_pct, s.ratio.max_ratio_pct
            )
            for cell in scenario.cells
            for s in cell.slices
        }
        self._groups_by_scope: dict[tuple[int, int], list[UeGroup]] = {}
        for group in scenario.ue_groups:
            self._groups_by_scope.setdefault((group.cell_id, group.slice_id), []).append(group)

    def current_ratio(self, cell_id: int, slice_id: int) -> RrmPolicyRatio:
        with self._lock:
            ratio = self._ratios[(cell_id, slice_id)]
            return RrmPolicyRatio(ratio.min_ratio_pct, ratio.max_ratio_pct)

    def ratios(self) -> dict[tuple[int, int], RrmPolicyRatio]:
        with self._lock:
            return {
                scope: RrmPolicyRatio(r.min_ratio_pct, r.max_ratio_pct)
                for scope, r in self._ratios.items()
            }

    def apply_ratio_control(self, cell_id: int, slice_id: int, ratio: RrmPolicyRatio) -> None:
        """Stage a new min/max ratio pair for one slice.

        Rejected (state unchanged) unless the pair is valid on its own and
        jointly with the cell's other slices (sum of minimums <= 100).
        """
        with self._lock:
            if (cell_id, slice_id) not in self._ratios:
                raise InvariantViolation(f"unknown scope (cell {cell_id}, slice {slice_id})")
            ratio.validate()
            cell = self.scenario.cell(cell_id)
            min_sum = sum(
                ratio.min_ratio_pct
                if s.slice_id == slice_id
                else self._ratios[(cell_id, s.slice_id)].min_ratio_pct
                for s in cell.slices
            )
            if min_sum > 100:
                raise InvariantViolation(
                    f"cell {cell_id}: sum of min ratios would be {min_sum} > 100"
                )
            self._ratios[(cell_id, slice_id)] = RrmPolicyRatio(
                ratio.min_ratio_pct, ratio.max_ratio_pct
            )

    def tick(self) -> list[KpmReport]:
        """Advance one tick and return this tick's KPM reports."""
        with self._lock:
            reports: list[KpmReport] = []
            jitter = self.scenario.demand_jitter_frac
            for cell in self.scenario.cells:
                demands: dict[int, float] = {}
                rates: dict[int, float] = {}
                avg_cqis: dict[int, float] = {}
                for slice_cfg in cell.slices:
                    sid = slice_cfg.slice_id
                    groups = self._groups_by_scope.get((cell.cell_id, sid), [])
                    demand = 0.0
                    cqi_weight = 0.0
                    ue_total = 0
                    for group in groups:
                        sampled = group.cqi_mean
                        if group.cqi_jitter > 0:
                            sampled += self._rng.randint(-group.cqi_jitter, group.cqi_jitter)
                        sampled = min(15, max(1, sampled))
                        cqi_weight += sampled * group.count
                        ue_total += group.count
                        demand += group.per_ue_target_mbps * group.count
                    if demand > 0 and jitter > 0:
                        demand *= 1.0 + self._rng.uniform(-jitter, jitter)
                    avg_cqi = cqi_weight / ue_total if ue_total else 0.0
                    demands[sid] = demand
                    rates[sid] = slice_rate_per_prb(avg_cqi) if ue_total else 0.0
                    avg_cqis[sid] = avg_cqi

                ratio_view = {
                    s.slice_id: (
                        self._ratios[(cell.cell_id, s.slice_id)].min_ratio_pct,
                        self._ratios[(cell.cell_id, s.slice_id)].max_ratio_pct,
                    )
                    for s in cell.slices
                }
                alloc = allocate_prb(cell, demands, rates, ratio_view)
                for slice_cfg in cell.slices:
                    sid = slice_cfg.slice_id
                    prb = alloc[sid]
                    throughput = min(demands[sid], prb * rates[sid])
                    reports.append(
                        KpmReport(
                            tick=self.tick_count,
                            cell_id=cell.cell_id,
                            slice_id=sid,
                            dl_throughput_mbps=throughput,
                            prb_used=prb,
                            avg_cqi=avg_cqis[sid],
                        )
                    )
            self.tick_count += 1
            return reports
