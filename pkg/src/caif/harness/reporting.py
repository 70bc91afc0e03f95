"""Aggregation of run records into the accuracy/latency report.

Aggregates are pure sums/groupings, so the report is invariant under any
permutation of the input records.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

from caif.harness.stats import CiResult, wilson_ci
from caif.harness.runner import RunRecord
from caif.pipeline.types import MANDATORY_FIELDS


@dataclass
class ModeReport:
    mode: str
    overall: CiResult
    per_field: dict[str, CiResult]
    per_shot: dict[int, dict[str, Any]]  # shots -> {accuracy ci, mean latency}
    harmful_executions: int
    blocked: int

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode,
            "overall": self.overall.to_json_dict(),
            "per_field": {k: v.to_json_dict() for k, v in self.per_field.items()},
            "per_shot": {
                str(shots): {
                    "accuracy": data["accuracy"].to_json_dict(),
                    "mean_latency_s": data["mean_latency_s"],
                }
                for shots, data in self.per_shot.items()
            },
            "harmful_executions": self.harmful_executions,
            "blocked": self.blocked,
        }


def report(records: Iterable[RunRecord]) -> dict[str, ModeReport]:
    """Overall, field-level and per-shot accuracy with 95% CIs, mean
    latency, and harmful-execution counts, grouped by run mode."""
    records = list(records)
    if not records:
        raise ValueError("no records to report")

    by_mode: dict[str, list[RunRecord]] = {}
    for record in records:
        by_mode.setdefault(record.mode.value, []).append(record)

    out: dict[str, ModeReport] = {}
    for mode, mode_records in sorted(by_mode.items()):
        trials = len(mode_records)
        overall = wilson_ci(sum(1 for r in mode_records if r.success), trials)
        per_field = {
            name: wilson_ci(sum(1 for r in mode_records if r.per_field_match[name]), trials)
            for name in MANDATORY_FIELDS
        }
        per_shot: dict[int, dict[str, Any]] = {}
        for shots in sorted({r.shots for r in mode_records}):
            shot_records = [r for r in mode_records if r.shots == shots]
            per_shot[shots] = {
                "accuracy": wilson_ci(
                    sum(1 for r in shot_records if r.success), len(shot_records)
                ),
                "mean_latency_s": sum(r.latency_s for r in shot_records) / len(shot_records),
            }
        out[mode] = ModeReport(
            mode=mode,
            overall=overall,
            per_field=per_field,
            per_shot=per_shot,
            harmful_executions=sum(1 for r in mode_records if r.harmful),
            blocked=sum(1 for r in mode_records if not r.forwarded),
        )
    return out


def format_report(reports: dict[str, ModeReport]) -> str:
    lines: list[str] = []
    for mode, rep in reports.items():
        o = rep.overall
        lines.append(f"=== {mode} ===")
        lines.append(
            f"overall accuracy: {o.point_pct:.1f}% "
            f"[{o.lo_pct:.1f}, {o.hi_pct:.1f}] ({o.successes}/{o.trials})"
        )
        lines.append(
            f"harmful executions: {rep.harmful_executions}    blocked: {rep.blocked}"
        )
        lines.append("field-level accuracy:")
        for name, ci in rep.per_field.items():
            lines.append(
                f"  {name:<14} {ci.point_pct:6.1f}%  [{ci.lo_pct:.1f}, {ci.hi_pct:.1f}]"
            )
        lines.append("per-shot:")
        for shots, data in rep.per_shot.items():
            ci = data["accuracy"]
            lines.append(
                f"  {shots}-shot: {ci.point_pct:6.1f}%  [{ci.lo_pct:.1f}, {ci.hi_pct:.1f}]  "
                f"mean latency {data['mean_latency_s'] * 1000:.2f} ms"
            )
        lines.append("")
    return "\n".join(lines)


def write_report_json(reports: dict[str, ModeReport], path: str | Path) -> None:
    payload = {mode: rep.to_json_dict() for mode, rep in reports.items()}
    Path(path).write_text(json.dumps(payload, indent=2), encoding="utf-8")


def write_per_shot_csv(reports: dict[str, ModeReport], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "mode",
                "shots",
                "trials",
                "successes",
                "accuracy_pct",
                "lo_pct",
                "hi_pct",
                "mean_latency_s",
            ]
        )
        for mode, rep in reports.items():
            for shots, data in rep.per_shot.items():
                ci = data["accuracy"]
                writer.writerow(
                    [
                        mode,
                        shots,
                        ci.trials,
                        ci.successes,
                        f"{ci.point_pct:.2f}",
                        f"{ci.lo_pct:.2f}",
                        f"{ci.hi_pct:.2f}",
                        f"{data['mean_latency_s']:.6f}",
                    ]
                )
