"""Scenario config loading (JSON or TOML)."""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from caif.sim.types import (
    Cell,
    Mobility,
    RrmPolicyRatio,
    Scenario,
    ServiceType,
    SliceConfig,
    UeGroup,
)

BUNDLED_SCENARIO = Path(__file__).parent.parent / "assets" / "scenario_campus.json"


class ScenarioParseError(ValueError):
    def __init__(self, path: str | Path, detail: str):
        super().__init__(f"scenario {path}: {detail}")


def _build(raw: dict[str, Any], path: str | Path) -> Scenario:
    try:
        cells = [
            Cell(
                cell_id=int(c["cell_id"]),
                total_prb=int(c["total_prb"]),
                slices=[
                    SliceConfig(
                        slice_id=int(s["slice_id"]),
                        service=ServiceType(s["service"]),
                        ratio=RrmPolicyRatio(
                            min_ratio_pct=int(s["ratio"]["min_ratio_pct"]),
                            max_ratio_pct=int(s["ratio"]["max_ratio_pct"]),
                        ),
                    )
                    for s in c["slices"]
                ],
                initial_ue_count=(
                    int(c["initial_ue_count"]) if "initial_ue_count" in c else None
                ),
            )
            for c in raw["cells"]
        ]
        groups = [
            UeGroup(
                name=str(g["name"]),
                mobility=Mobility(g["mobility"]),
                count=int(g["count"]),
                cell_id=int(g["cell_id"]),
                slice_id=int(g["slice_id"]),
                qos_id=int(g["qos_id"]),
                gbr=bool(g["gbr"]),
                per_ue_target_mbps=float(g["per_ue_target_mbps"]),
                cqi_mean=int(g["cqi_mean"]),
                cqi_jitter=int(g.get("cqi_jitter", 0)),
            )
            for g in raw.get("ue_groups", [])
        ]
        scenario = Scenario(
            cells=cells,
            ue_groups=groups,
            tick_s=float(raw.get("tick_s", 1.0)),
            sim_seed=int(raw.get("sim_seed", 0)),
            demand_jitter_frac=float(raw.get("demand_jitter_frac", 0.05)),
        )
    except (KeyError, ValueError, TypeError) as exc:
        field = exc.args[0] if isinstance(exc, KeyError) else exc
        raise ScenarioParseError(path, f"bad or missing field: {field}") from exc
    try:
        scenario.validate()
    except ValueError as exc:
        raise ScenarioParseError(path, str(exc)) from exc
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    """Parse and validate a scenario file; .toml parses as TOML, anything
    else as JSON."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".toml":
        try:
            raw = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ScenarioParseError(path, f"invalid TOML: {exc}") from exc
    else:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioParseError(
                path, f"invalid JSON at line {exc.lineno}: {exc.msg}"
            ) from exc
    if not isinstance(raw, dict) or "cells" not in raw:
        raise ScenarioParseError(path, "top-level object with a 'cells' list required")
    return _build(raw, path)


def load_bundled_scenario() -> Scenario:
    return load_scenario(BUNDLED_SCENARIO)
