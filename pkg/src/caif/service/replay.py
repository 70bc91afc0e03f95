"""Timed intent-script replay over the engine.

Scripts drive operator turns, contract activation and policy stops at
fixed simulated times, producing the per-tick throughput/ratio series and
Policy/Stop markers for the assurance scenarios.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from caif.service.config import ASSET_DIR, AppConfig
from caif.service.engine import Engine, SessionStatus

SINGLE_INTENT_SCRIPT = ASSET_DIR / "replay_single_intent.json"
DYNAMIC_INTENT_SCRIPT = ASSET_DIR / "replay_dynamic_intent.json"


@dataclass
class ReplayMarker:
    tick: int
    label: str  # "Policy <n>" or "Stop"
    policy_id: str
    cell_id: int
    slice_id: int


@dataclass
class ReplayResult:
    rows: list[dict[str, Any]] = field(default_factory=list)
    markers: list[ReplayMarker] = field(default_factory=list)
    events: list[dict[str, Any]] = field(default_factory=list)
    session_ids: dict[str, str] = field(default_factory=dict)
    engine: Engine | None = None

    def series(self, cell_id: int, slice_id: int) -> list[dict[str, Any]]:
        return [
            row for row in self.rows if row["cell_id"] == cell_id and row["slice_id"] == slice_id
        ]

    def write_csv(self, path: str | Path) -> None:
        fieldnames = [
            "tick",
            "cell_id",
            "slice_id",
            "dl_throughput_mbps",
            "prb_used",
            "avg_cqi",
            "min_ratio_pct",
            "max_ratio_pct",
            "target_mbps",
            "marker",
        ]
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=fieldnames)
            writer.writeheader()
            for row in self.rows:
                writer.writerow(row)


class ReplayScriptError(ValueError):
    pass


def load_script(path: str | Path) -> dict[str, Any]:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if "duration_s" not in raw or "events" not in raw:
        raise ReplayScriptError(f"script {path}: needs duration_s and events")
    for i, event in enumerate(raw["events"]):
        if "at_s" not in event or "action" not in event:
            raise ReplayScriptError(f"script {path}: event {i} needs at_s and action")
        if event["action"] not in ("turn", "activate", "stop"):
            raise ReplayScriptError(f"script {path}: event {i} unknown action {event['action']}")
    return raw


def run_replay(
    script: dict[str, Any] | str | Path,
    config: AppConfig | None = None,
    engine: Engine | None = None,
) -> ReplayResult:
    """Run the script to completion as fast as the host allows (simulated
    time only; no wall-clock pacing)."""
    if not isinstance(script, dict):
        script = load_script(script)
    engine = engine or Engine(config or AppConfig())
    result = ReplayResult(engine=engine)

    events_by_tick: dict[int, list[dict[str, Any]]] = {}
    for event in script["events"]:
        events_by_tick.setdefault(int(event["at_s"]), []).append(event)

    policy_numbers: dict[str, int] = {}

    def session_for(name: str) -> str:
        if name not in result.session_ids:
            result.session_ids[name] = engine.create_session().session_id
        return result.session_ids[name]

    def execute(event: dict[str, Any]) -> None:
        action = event["action"]
        name = event.get("session", "default")
        if action == "turn":
            engine.submit_turn(session_for(name), event["text"])
        elif action == "activate":
            session = engine.get_session(session_for(name))
            if session.status is not SessionStatus.CONTRACT_READY or not session.contract_id:
                raise ReplayScriptError(
                    f"activate at t={event['at_s']}: session {name!r} has no contract "
                    f"(status {session.status.value})"
                )
            engine.activate_contract(session.contract_id)
        elif action == "stop":
            policy_id = event.get("policy_id")
            if policy_id is None:
                session = engine.get_session(session_for(name))
                policy_id = session.policy_id
            if not policy_id:
                raise ReplayScriptError(f"stop at t={event['at_s']}: no policy to stop")
            engine.stop_policy(policy_id)

    duration = int(script["duration_s"])
    log_cursor = 0
    for tick in range(duration):
        for event in events_by_tick.get(tick, ()):
            execute(event)
        ratios_in_effect = engine.sim.ratios()
        targets = {
            (p.cell_id, p.slice_id): p.target_throughput_mbps
            for p in engine.policies.enforced()
        }
        step = engine.step()

        # markers for lifecycle events stamped this tick
        new_events = engine.event_log[log_cursor:]
        log_cursor = len(engine.event_log)
        marker_by_scope: dict[tuple[int, int], str] = {}
        for ev in new_events:
            if ev["kind"] == "policy_enforced":
                policy = ev["policy"]
                number = policy_numbers.setdefault(policy["policy_id"], len(policy_numbers) + 1)
                marker = ReplayMarker(
                    tick=ev["tick"],
                    label=f"Policy {number}",
                    policy_id=policy["policy_id"],
                    cell_id=policy["scope"]["cell_id"],
                    slice_id=policy["scope"]["slice_id"],
                )
                result.markers.append(marker)
                marker_by_scope[(marker.cell_id, marker.slice_id)] = marker.label
            elif ev["kind"] == "policy_stopped" and "deadline" not in ev.get("reason", ""):
                policy = ev["policy"]
                marker = ReplayMarker(
                    tick=ev["tick"],
                    label="Stop",
                    policy_id=policy["policy_id"],
                    cell_id=policy["scope"]["cell_id"],
                    slice_id=policy["scope"]["slice_id"],
                )
                result.markers.append(marker)
                marker_by_scope[(marker.cell_id, marker.slice_id)] = marker.label

        for report in step.reports:
            scope = (report.cell_id, report.slice_id)
            ratio = ratios_in_effect[scope]
            result.rows.append(
                {
                    "tick": report.tick,
                    "cell_id": report.cell_id,
                    "slice_id": report.slice_id,
                    "dl_throughput_mbps": round(report.dl_throughput_mbps, 6),
                    "prb_used": report.prb_used,
                    "avg_cqi": round(report.avg_cqi, 4),
                    "min_ratio_pct": ratio.min_ratio_pct,
                    "max_ratio_pct": ratio.max_ratio_pct,
                    "target_mbps": targets.get(scope, ""),
                    "marker": marker_by_scope.get(scope, ""),
                }
            )

    result.events = list(engine.event_log)
    return result
