"""Two-level RRM-policy-ratio PRB allocation.

Slices with positive demand are guaranteed floor(min_ratio% x total_prb)
PRBs; the remainder is distributed by iterative water-filling proportional
to residual demand, never exceeding floor(max_ratio% x total_prb) per
slice. Ties break by ascending slice id, so allocation is deterministic.
"""

from __future__ import annotations

import math

from caif.sim.types import Cell


def ratio_caps(cell: Cell, slice_id: int, ratio_pcts: tuple[int, int]) -> tuple[int, int]:
    min_pct, max_pct = ratio_pcts
    return (
        math.floor(min_pct * cell.total_prb / 100),
        math.floor(max_pct * cell.total_prb / 100),
    )


def allocate_prb(
    cell: Cell,
    demands: dict[int, float],
    rates: dict[int, float],
    ratios: dict[int, tuple[int, int]] | None = None,
) -> dict[int, int]:
    """Allocate PRBs to the cell's slices for one tick.

    demands/rates are per-slice Mbps and Mbps-per-PRB. ratios optionally
    override the cell's configured (min_pct, max_pct) pairs, e.g. with the
    live controller state.
    """
    slice_ids = sorted(s.slice_id for s in cell.slices)
    ratio_by_id = {
        s.slice_id: (s.ratio.min_ratio_pct, s.ratio.max_ratio_pct) for s in cell.slices
    }
    if ratios:
        ratio_by_id.update(ratios)

    alloc: dict[int, int] = {}
    caps: dict[int, int] = {}
    for sid in slice_ids:
        demand = demands.get(sid, 0.0)
        floor_min, floor_max = ratio_caps(cell, sid, ratio_by_id[sid])
        caps[sid] = floor_max
        # zero-demand slices receive nothing; positive demand guarantees
        # the configured minimum even when demand needs fewer PRBs
        alloc[sid] = floor_min if demand > 0 else 0

    remaining = cell.total_prb - sum(alloc.values())

    def residual(sid: int) -> float:
        rate = rates.get(sid, 0.0)
        return max(0.0, demands.get(sid, 0.0) - alloc[sid] * rate)

    def prbs_wanted(sid: int) -> int:
        rate = rates.get(sid, 0.0)
        if rate <= 0:
            return 0
        return math.ceil(residual(sid) / rate)

    while remaining > 0:
        active = [
            sid
            for sid in slice_ids
            if alloc[sid] < caps[sid] and residual(sid) > 0 and prbs_wanted(sid) > 0
        ]
        if not active:
            break
        total_residual = sum(residual(sid) for sid in active)
        granted_any = False
        grants: dict[int, int] = {}
        for sid in active:
            share = math.floor(remaining * residual(sid) / total_residual)
            share = min(share, caps[sid] - alloc[sid], prbs_wanted(sid))
            if share > 0:
                grants[sid] = share
                granted_any = True
        if not granted_any:
            # rounding underflow: hand one PRB to the neediest active slice
            # (largest residual, ties by ascending slice id)
            neediest = max(active, key=lambda sid: (residual(sid), -sid))
            grants[neediest] = 1
        for sid, extra in grants.items():
            alloc[sid] += extra
            remaining -= extra

    return alloc
