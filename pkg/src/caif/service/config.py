"""Deployment configuration for the gateway service and CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from caif.nearrt.controller import GainConfig
from caif.pipeline.types import BackendConfig, BackendKind

ASSET_DIR = Path(__file__).parent.parent / "assets"
DEFAULT_CATALOG = ASSET_DIR / "catalog.json"
DEFAULT_SCENARIO = ASSET_DIR / "scenario_campus.json"


@dataclass
class AppConfig:
    catalog_path: Path = DEFAULT_CATALOG
    scenario_path: Path = DEFAULT_SCENARIO
    template_dir: Path | None = None  # None = packaged prompt templates
    profiling_backend: BackendConfig = field(default_factory=BackendConfig)
    evaluator_backend: BackendConfig = field(default_factory=BackendConfig)
    gains: GainConfig = field(default_factory=GainConfig)
    max_rounds: int = 3
    sim_seed: int | None = None  # None = scenario file's seed
    tick_interval_s: float = 1.0  # wall-clock pacing of the serve loop
    window_s: float = 60.0
    history_path: Path | None = None  # NDJSON persistence of the O1 store
    kpm_stream_path: Path | None = None  # NDJSON record of every KpmReport

    @classmethod
    def from_file(cls, path: str | Path) -> "AppConfig":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls.from_dict(raw, base=Path(path).parent)

    @classmethod
    def from_dict(cls, raw: dict[str, Any], base: Path | None = None) -> "AppConfig":
        def resolve(key: str, default: Path | None) -> Path | None:
            if key not in raw:
                return default
            p = Path(raw[key])
            if base is not None and not p.is_absolute():
                p = base / p
            return p

        def backend(key: str) -> BackendConfig:
            if key not in raw:
                return BackendConfig()
            b = raw[key]
            return BackendConfig(
                backend=BackendKind(b.get("backend", "Mock")),
                model_name=b.get("model_name", "mock"),
                temperature=float(b.get("temperature", 0.6)),
                top_p=float(b.get("top_p", 0.95)),
                endpoint=b.get("endpoint"),
            )

        gains_raw = raw.get("controller", {})
        gains = GainConfig(
            k_p=float(gains_raw.get("k_p", GainConfig.k_p)),
            deadband_frac=float(gains_raw.get("deadband_frac", GainConfig.deadband_frac)),
            step_cap_pts=int(gains_raw.get("step_cap_pts", GainConfig.step_cap_pts)),
            guard_band_pts=int(gains_raw.get("guard_band_pts", GainConfig.guard_band_pts)),
        )
        return cls(
            catalog_path=resolve("catalog_path", DEFAULT_CATALOG),
            scenario_path=resolve("scenario_path", DEFAULT_SCENARIO),
            template_dir=resolve("template_dir", None),
            profiling_backend=backend("profiling_backend"),
            evaluator_backend=backend("evaluator_backend"),
            gains=gains,
            max_rounds=int(raw.get("max_rounds", 3)),
            sim_seed=raw.get("sim_seed"),
            tick_interval_s=float(raw.get("tick_interval_s", 1.0)),
            window_s=float(raw.get("window_s", 60.0)),
            history_path=resolve("history_path", None),
            kpm_stream_path=resolve("kpm_stream_path", None),
        )
