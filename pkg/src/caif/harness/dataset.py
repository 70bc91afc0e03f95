"""Seeded intent-dataset generation.

Each instance spreads the mandatory intent fields across `shots` operator
turns, with varied phrasing, slice/cell identifiers, percentages and
deadlines. Ground truth is recorded alongside.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

from caif.pipeline.types import Action, Conversation, Metric, Speaker, StructuredIntent

DEFAULT_SHOT_DISTRIBUTION = {1: 100, 2: 100, 3: 100, 4: 100, 5: 100}

_DECREASE_VERBS = ("decrease", "reduce", "lower")
_INCREASE_VERBS = ("increase", "raise", "boost")
_PCT_CHOICES = (5, 10, 15, 20, 25, 30, 40, 50, 60, 70, 80, 90)
_DEADLINE_CHOICES = (  # (phrase template, seconds)
    ("in {n} seconds", 1),
    ("within {n} seconds", 1),
    ("in {n} minutes", 60),
    ("within {n} minutes", 60),
)
_DEADLINE_AMOUNTS = {1: (30, 45, 90), 60: (1, 2, 5, 10, 15)}


@dataclass
class DatasetInstance:
    id: str
    shots: int
    turns: list[str]
    ground_truth: StructuredIntent

    def conversation(self) -> Conversation:
        conv = Conversation(session_id=self.id)
        for i, text in enumerate(self.turns):
            conv.add(Speaker.OPERATOR, text, timestamp=float(i))
        return conv

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "shots": self.shots,
            "turns": list(self.turns),
            "ground_truth": self.ground_truth.field_values(),
        }

    @classmethod
    def from_json_dict(cls, raw: dict[str, Any]) -> "DatasetInstance":
        return cls(
            id=raw["id"],
            shots=int(raw["shots"]),
            turns=list(raw["turns"]),
            ground_truth=StructuredIntent.from_fields(raw["ground_truth"]),
        )


def _render_turns(
    rng: random.Random,
    shots: int,
    cell_id: int,
    slice_id: int,
    metric: Metric,
    action: Action,
    pct: int,
    deadline_phrase: str,
) -> list[str]:
    verb = rng.choice(_DECREASE_VERBS if action is Action.DECREASE else _INCREASE_VERBS)
    direction = "downlink" if metric is Metric.DOWNLINK_THROUGHPUT else "uplink"
    scope_variants = (
        f"for slice {slice_id} of cell {cell_id}",
        f"in slice ID {slice_id} of cell {cell_id}",
        f"slice {slice_id} on cell {cell_id}",
    )
    scope = rng.choice(scope_variants)

    if shots == 1:
        return [
            f"In slice ID {slice_id} of cell {cell_id}, {verb} {direction} throughput "
            f"by {pct}% {deadline_phrase}"
        ]
    if shots == 2:
        return [
            f"{verb} {direction} throughput by {pct}% {deadline_phrase}",
            scope,
        ]
    if shots == 3:
        return [
            f"{verb} {direction} throughput by {pct}%",
            f"do it {deadline_phrase}",
            scope,
        ]
    if shots == 4:
        return [
            f"please {verb} the {direction} throughput",
            f"by {pct}%",
            f"do it {deadline_phrase}",
            scope,
        ]
    return [
        f"please {verb} the {direction} throughput",
        f"by {pct}%",
        f"do it {deadline_phrase}",
        f"on cell {cell_id}",
        f"slice {slice_id} please",
    ]


def generate_dataset(
    seed: int,
    n: int = 500,
    shot_distribution: dict[int, int] | None = None,
) -> list[DatasetInstance]:
    """Deterministic dataset of n instances; the distribution maps shot
    count (1..5) to instance count and must sum to n. When omitted, n is
    split evenly across the five shot classes."""
    if shot_distribution is None:
        base, remainder = divmod(n, 5)
        distribution = {shots: base + (1 if shots <= remainder else 0) for shots in range(1, 6)}
    else:
        distribution = dict(shot_distribution)
    if set(distribution) - {1, 2, 3, 4, 5} or any(v < 0 for v in distribution.values()):
        raise ValueError("shot_distribution keys must be within 1..5, counts >= 0")
    if sum(distribution.values()) != n:
        raise ValueError(f"shot_distribution sums to {sum(distribution.values())}, expected {n}")

    rng = random.Random(seed)
    instances: list[DatasetInstance] = []
    index = 0
    for shots in sorted(distribution):
        for _ in range(distribution[shots]):
            cell_id = rng.randint(1, 3)
            slice_id = rng.randint(1, 2)
            metric = rng.choice((Metric.DOWNLINK_THROUGHPUT, Metric.UPLINK_THROUGHPUT))
            action = rng.choice((Action.INCREASE, Action.DECREASE))
            pct = rng.choice(_PCT_CHOICES)
            phrase_tpl, unit_s = rng.choice(_DEADLINE_CHOICES)
            amount = rng.choice(_DEADLINE_AMOUNTS[unit_s])
            deadline_phrase = phrase_tpl.format(n=amount)
            deadline_s = amount * unit_s if unit_s == 1 else amount * 60

            turns = _render_turns(
                rng, shots, cell_id, slice_id, metric, action, pct, deadline_phrase
            )
            ground_truth = StructuredIntent(
                cell_id=cell_id,
                slice_id=slice_id,
                metric=metric,
                action=action,
                magnitude_pct=float(pct),
                deadline_s=deadline_s,
            )
            instances.append(
                DatasetInstance(
                    id=f"intent-{seed}-{index:04d}",
                    shots=shots,
                    turns=turns,
                    ground_truth=ground_truth,
                )
            )
            index += 1
    return instances


def save_dataset(instances: Iterable[DatasetInstance], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for instance in instances:
            fh.write(json.dumps(instance.to_json_dict()) + "\n")


def load_dataset(path: str | Path) -> list[DatasetInstance]:
    instances = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                instances.append(DatasetInstance.from_json_dict(json.loads(line)))
    return instances
