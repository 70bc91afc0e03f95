"""RAN simulator: CQI rate model, PRB allocator, tick loop, scenario IO."""

from __future__ import annotations

import json
import random

import pytest

from caif.sim import (
    CQI_EFFICIENCY,
    Cell,
    InvariantViolation,
    Mobility,
    RanSimulator,
    RrmPolicyRatio,
    Scenario,
    ScenarioParseError,
    ServiceType,
    SliceConfig,
    UeGroup,
    allocate_prb,
    load_bundled_scenario,
    load_scenario,
    slice_rate_per_prb,
)


def make_cell(ratios: list[tuple[int, int]], total_prb: int = 100, cell_id: int = 1) -> Cell:
    return Cell(
        cell_id=cell_id,
        total_prb=total_prb,
        slices=[
            SliceConfig(
                slice_id=i + 1,
                service=ServiceType.EMBB,
                ratio=RrmPolicyRatio(min_ratio_pct=lo, max_ratio_pct=hi),
            )
            for i, (lo, hi) in enumerate(ratios)
        ],
    )


class TestCqiRate:
    def test_table_endpoints(self):
        assert slice_rate_per_prb(15) == pytest.approx(0.18 * 5.5547)  # ~0.9998
        assert slice_rate_per_prb(1) == pytest.approx(0.18 * 0.1523)  # ~0.0274

    def test_all_integer_cqis_match_table(self):
        for cqi in range(1, 16):
            assert slice_rate_per_prb(cqi) == pytest.approx(0.18 * CQI_EFFICIENCY[cqi - 1])

    def test_monotone_including_fractions(self):
        grid = [1 + 0.25 * k for k in range(57)]  # 1.0 .. 15.0
        rates = [slice_rate_per_prb(c) for c in grid]
        assert all(a <= b for a, b in zip(rates, rates[1:]))

    def test_interpolation_midpoint(self):
        mid = slice_rate_per_prb(10.5)
        assert mid == pytest.approx(0.18 * (CQI_EFFICIENCY[9] + CQI_EFFICIENCY[10]) / 2)

    def test_out_of_range(self):
        for bad in (0, 0.99, 15.01, -3):
            with pytest.raises(ValueError):
                slice_rate_per_prb(bad)


class TestAllocator:
    def test_water_filling_hand_trace(self):
        # mins (10,10), split 80 equally, slice A hits its 50 cap
        cell = make_cell([(10, 50), (10, 60)])
        alloc = allocate_prb(cell, {1: 1000.0, 2: 1000.0}, {1: 0.5, 2: 0.5})
        assert alloc == {1: 50, 2: 50}

    def test_zero_demand_zero_prbs(self):
        cell = make_cell([(0, 100)])
        assert allocate_prb(cell, {1: 0.0}, {1: 0.5}) == {1: 0}

    def test_one_sided_demand(self):
        cell = make_cell([(0, 60), (0, 60)])
        # A wants ceil(10/0.5)=20 PRBs < cap, B gets nothing
        alloc = allocate_prb(cell, {1: 10.0, 2: 0.0}, {1: 0.5, 2: 0.5})
        assert alloc[2] == 0
        assert alloc[1] == min(60, 20)

    def test_min_guaranteed_even_for_small_demand(self):
        cell = make_cell([(20, 80)])
        alloc = allocate_prb(cell, {1: 0.1}, {1: 0.5})
        assert alloc[1] >= 20

    def test_deterministic_tie_break(self):
        cell = make_cell([(0, 100), (0, 100), (0, 100)])
        demands = {1: 7.0, 2: 7.0, 3: 7.0}
        rates = {1: 1.0, 2: 1.0, 3: 1.0}
        first = allocate_prb(cell, demands, rates)
        for _ in range(5):
            assert allocate_prb(cell, demands, rates) == first

    def test_randomized_conservation_and_ratio_respect(self):
        # 1,000 randomized cells: sum <= total, and positive-demand slices
        # sit within [floor(min), floor(max)]
        rng = random.Random(2024)
        for trial in range(1000):
            n_slices = rng.randint(1, 4)
            total_prb = rng.choice((50, 100, 273))
            mins = []
            budget = 100
            for _ in range(n_slices):
                lo = rng.randint(0, max(0, budget // max(1, n_slices)))
                budget -= lo
                mins.append(lo)
            ratios = [(lo, rng.randint(lo, 100)) for lo in mins]
            cell = make_cell(ratios, total_prb=total_prb)
            demands = {
                s.slice_id: rng.choice((0.0, rng.uniform(0.01, 500.0)))
                for s in cell.slices
            }
            rates = {s.slice_id: rng.choice((0.0274, 0.2116, 0.5453, 0.9998)) for s in cell.slices}
            alloc = allocate_prb(cell, demands, rates)

            assert sum(alloc.values()) <= total_prb, trial
            for s in cell.slices:
                sid = s.slice_id
                lo, hi = ratios[sid - 1]
                assert alloc[sid] <= (hi * total_prb) // 100, (trial, sid)
                if demands[sid] > 0:
                    assert alloc[sid] >= (lo * total_prb) // 100, (trial, sid)
                else:
                    assert alloc[sid] == 0


class TestSimulatorTick:
    def test_calibration_anchor_points(self):
        sim = RanSimulator(load_bundled_scenario())
        reports = {(r.cell_id, r.slice_id): r for r in sim.tick()}
        s1 = reports[(1, 1)].dl_throughput_mbps
        s2 = reports[(1, 2)].dl_throughput_mbps
        assert abs(s1 - 22.0) <= 2.2  # ~22 Mbps +- 10%
        assert abs(s2 - 12.0) <= 1.2  # ~12 Mbps +- 10%

    def test_zero_ues_zero_throughput(self):
        scenario = Scenario(cells=[make_cell([(0, 100), (0, 100)])], ue_groups=[])
        sim = RanSimulator(scenario)
        for report in sim.tick():
            assert report.dl_throughput_mbps == 0.0
            assert report.prb_used == 0

    def test_capacity_limited_branch_exact(self):
        # max ratio low enough that prb x rate < demand
        scenario = Scenario(
            cells=[make_cell([(0, 10)])],
            ue_groups=[
                UeGroup(
                    name="g",
                    mobility=Mobility.FIXED,
                    count=10,
                    cell_id=1,
                    slice_id=1,
                    qos_id=8,
                    gbr=False,
                    per_ue_target_mbps=40.0,
                    cqi_mean=15,
                    cqi_jitter=0,
                )
            ],
            demand_jitter_frac=0.0,
        )
        sim = RanSimulator(scenario)
        report = sim.tick()[0]
        assert report.prb_used == 10
        assert report.dl_throughput_mbps == pytest.approx(10 * slice_rate_per_prb(15), abs=1e-9)

    def test_throughput_law(self):
        sim = RanSimulator(load_bundled_scenario())
        for _ in range(50):
            ratios = sim.ratios()
            for report in sim.tick():
                # throughput never exceeds capacity of the PRBs it used
                if report.avg_cqi >= 1:
                    cap = report.prb_used * slice_rate_per_prb(report.avg_cqi)
                    assert report.dl_throughput_mbps <= cap + 1e-9

    def test_conservation_every_tick(self):
        sim = RanSimulator(load_bundled_scenario())
        for _ in range(100):
            by_cell: dict[int, int] = {}
            for report in sim.tick():
                by_cell[report.cell_id] = by_cell.get(report.cell_id, 0) + report.prb_used
            for cell in sim.scenario.cells:
                assert by_cell[cell.cell_id] <= cell.total_prb

    def test_determinism_identical_streams(self):
        def stream() -> list[tuple]:
            sim = RanSimulator(load_bundled_scenario())
            out = []
            for _ in range(40):
                out.extend(
                    (r.tick, r.cell_id, r.slice_id, r.dl_throughput_mbps, r.prb_used, r.avg_cqi)
                    for r in sim.tick()
                )
            return out

        assert stream() == stream()


class TestApplyRatioControl:
    def test_cap_takes_effect_next_tick(self):
        sim = RanSimulator(load_bundled_scenario())
        sim.tick()
        sim.apply_ratio_control(1, 1, RrmPolicyRatio(min_ratio_pct=5, max_ratio_pct=40))
        report = next(r for r in sim.tick() if (r.cell_id, r.slice_id) == (1, 1))
        assert report.prb_used <= 40

    def test_min_sum_invariant_rejected(self):
        sim = RanSimulator(load_bundled_scenario())
        sim.apply_ratio_control(1, 1, RrmPolicyRatio(min_ratio_pct=50, max_ratio_pct=90))
        before = sim.ratios()[(1, 2)]
        with pytest.raises(InvariantViolation):
            sim.apply_ratio_control(1, 2, RrmPolicyRatio(min_ratio_pct=60, max_ratio_pct=80))
        assert sim.ratios()[(1, 2)].min_ratio_pct == before.min_ratio_pct

    def test_invalid_pair_rejected(self):
        sim = RanSimulator(load_bundled_scenario())
        with pytest.raises(ValueError):
            sim.apply_ratio_control(1, 1, RrmPolicyRatio(min_ratio_pct=60, max_ratio_pct=40))

    def test_reapply_is_idempotent(self):
        sim = RanSimulator(load_bundled_scenario())
        current = sim.ratios()[(1, 1)]
        sim.tick()
        sim.apply_ratio_control(1, 1, current)
        sim2 = RanSimulator(load_bundled_scenario())
        sim2.tick()
        a = [r.dl_throughput_mbps for r in sim.tick()]
        b = [r.dl_throughput_mbps for r in sim2.tick()]
        assert a == b


class TestScenarioIo:
    def test_bundled_campus_shape(self):
        scenario = load_bundled_scenario()
        assert len(scenario.cells) == 3
        assert all(len(c.slices) == 2 for c in scenario.cells)
        assert sum(g.count for g in scenario.ue_groups) == 120
        by_name = {g.name: g for g in scenario.ue_groups}
        ped, person, iot = by_name["Pedestrian"], by_name["Person"], by_name["IoT Device"]
        assert (ped.mobility, ped.count, ped.qos_id, ped.gbr, ped.per_ue_target_mbps) == (
            Mobility.RANDOM_WALK, 10, 1, True, 0.5,
        )
        assert (person.mobility, person.count, person.qos_id, person.gbr,
                person.per_ue_target_mbps) == (Mobility.FIXED, 30, 8, False, 40.0)
        assert (iot.mobility, iot.count, iot.qos_id, iot.gbr, iot.per_ue_target_mbps) == (
            Mobility.FIXED, 80, 9, False, 0.25,
        )
        # RandomWalk mobility carries the larger CQI jitter
        assert ped.cqi_jitter > person.cqi_jitter

    def test_initial_ue_split(self):
        scenario = load_bundled_scenario()
        assert [c.initial_ue_count for c in scenario.cells] == [43, 31, 46]

    def test_empty_cells_is_parse_error(self, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text(json.dumps({"cells": [], "ue_groups": []}))
        with pytest.raises(ScenarioParseError):
            load_scenario(path)

    def test_missing_field_is_parse_error(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text(json.dumps({"cells": [{"cell_id": 1, "slices": []}]}))
        with pytest.raises(ScenarioParseError) as err:
            load_scenario(path)
        assert "total_prb" in str(err.value)

    def test_dangling_group_reference(self, tmp_path):
        scenario = {
            "cells": [
                {
                    "cell_id": 1,
                    "total_prb": 100,
                    "slices": [
                        {"slice_id": 1, "service": "eMBB",
                         "ratio": {"min_ratio_pct": 0, "max_ratio_pct": 100}}
                    ],
                }
            ],
            "ue_groups": [
                {
                    "name": "g", "mobility": "Fixed", "count": 1, "cell_id": 9,
                    "slice_id": 1, "qos_id": 1, "gbr": False,
                    "per_ue_target_mbps": 1.0, "cqi_mean": 10,
                }
            ],
        }
        path = tmp_path / "dangling.json"
        path.write_text(json.dumps(scenario))
        with pytest.raises(ScenarioParseError):
            load_scenario(path)

    def test_toml_scenario(self, tmp_path):
        toml_text = """
tick_s = 1
sim_seed = 7

[[cells]]
cell_id = 1
total_prb = 50

[[cells.slices]]
slice_id = 1
service = "eMBB"
ratio = {min_ratio_pct = 0, max_ratio_pct = 100}

[[ue_groups]]
name = "g"
mobility = "Fixed"
count = 2
cell_id = 1
slice_id = 1
qos_id = 8
gbr = false
per_ue_target_mbps = 3.0
cqi_mean = 10
"""
        path = tmp_path / "scn.toml"
        path.write_text(toml_text)
        scenario = load_scenario(path)
        assert scenario.sim_seed == 7
        assert scenario.cells[0].total_prb == 50


class TestThroughputLawExact:
    def test_demand_limited_branch_exact(self):
        scenario = Scenario(
            cells=[make_cell([(0, 100)])],
            ue_groups=[
                UeGroup(
                    name="g", mobility=Mobility.FIXED, count=10, cell_id=1, slice_id=1,
                    qos_id=8, gbr=False, per_ue_target_mbps=1.0, cqi_mean=15, cqi_jitter=0,
                )
            ],
            demand_jitter_frac=0.0,
        )
        report = RanSimulator(scenario).tick()[0]
        # demand (10 Mbps) far below capacity -> throughput equals demand
        assert report.dl_throughput_mbps == pytest.approx(10.0, abs=1e-9)
        # and exactly min(demand, prb x rate)
        expected = min(10.0, report.prb_used * slice_rate_per_prb(15))
        assert report.dl_throughput_mbps == pytest.approx(expected, abs=1e-9)
