"""Baseline vs. contract-governed pipeline runs over the intent dataset,
including the fault-injection matrix."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from caif.contracts.model import IntentSpecification
from caif.contracts.registry import ContractRegistry
from caif.harness.dataset import DatasetInstance
from caif.pipeline.agents import SchemaParseFailure, profile
from caif.pipeline.backends import Fault, FaultKind, FaultPlan, MockBackend
from caif.pipeline.pipeline import IntentPipeline, OutcomeKind
from caif.pipeline.types import MANDATORY_FIELDS, StructuredIntent


class RunMode(str, Enum):
    BASELINE = "Baseline"
    CAIF = "CAIF"


class FailureKind(str, Enum):
    NONE = "none"
    MALFORMED = "malformed"  # schema-invalid/incomplete output
    BLOCKED_REJECTED = "blocked_rejected"  # guardrail refused to forward
    BLOCKED_CLARIFICATION = "blocked_clarification"


@dataclass
class RunRecord:
    instance_id: str
    shots: int
    mode: RunMode
    produced: dict[str, Any] | None
    failure: FailureKind
    per_field_match: dict[str, bool]
    latency_s: float
    rounds_used: int
    forwarded: bool
    harmful: bool

    @property
    def success(self) -> bool:
        return self.produced is not None and all(self.per_field_match.values())


def _match_fields(
    produced: StructuredIntent | None, truth: StructuredIntent
) -> dict[str, bool]:
    matches: dict[str, bool] = {}
    for name in MANDATORY_FIELDS:
        if produced is None:
            matches[name] = False
            continue
        matches[name] = produced.get(name) == truth.get(name)
    return matches


def run_baseline(instance: DatasetInstance, fault_plan: FaultPlan = ()) -> RunRecord:
    """Direct actuation: one profiling call, output forwarded with no
    evaluation and no contract validation."""
    backend = MockBackend(fault_plan=fault_plan)
    conversation = instance.conversation()
    start = time.perf_counter()
    try:
        intent = profile(conversation, backend)
        failure = FailureKind.NONE
    except SchemaParseFailure:
        intent = None
        failure = FailureKind.MALFORMED
    latency = time.perf_counter() - start

    matches = _match_fields(intent, instance.ground_truth)
    incomplete = intent is None or not intent.is_complete()
    mismatched = not all(matches.values())
    return RunRecord(
        instance_id=instance.id,
        shots=instance.shots,
        mode=RunMode.BASELINE,
        produced=intent.field_values() if intent is not None else None,
        failure=failure if failure is not FailureKind.NONE else (
            FailureKind.MALFORMED if incomplete else FailureKind.NONE
        ),
        per_field_match=matches,
        latency_s=latency,
        rounds_used=0,
        forwarded=True,  # the unsafe path always forwards
        harmful=incomplete or mismatched,
    )


def run_caif(
    instance: DatasetInstance,
    catalog: dict[str, IntentSpecification],
    fault_plan: FaultPlan = (),
    max_rounds: int = 3,
) -> RunRecord:
    """Full guarded pipeline: profile -> evaluate -> refine -> contract."""
    pipeline = IntentPipeline(
        profiling_backend=MockBackend(fault_plan=fault_plan),
        evaluator_backend=MockBackend(),
        catalog=catalog,
        registry=ContractRegistry(clock=lambda: 0.0),
        max_rounds=max_rounds,
    )
    conversation = instance.conversation()
    start = time.perf_counter()
    outcome = pipeline.run(conversation)
    latency = time.perf_counter() - start

    if outcome.kind is OutcomeKind.CONTRACT:
        intent = outcome.intent
        matches = _match_fields(intent, instance.ground_truth)
        return RunRecord(
            instance_id=instance.id,
            shots=instance.shots,
            mode=RunMode.CAIF,
            produced=intent.field_values(),
            failure=FailureKind.NONE,
            per_field_match=matches,
            latency_s=latency,
            rounds_used=outcome.rounds_used,
            forwarded=True,
            harmful=not all(matches.values()),
        )
    failure = (
        FailureKind.BLOCKED_CLARIFICATION
        if outcome.kind is OutcomeKind.NEEDS_CLARIFICATION
        else FailureKind.BLOCKED_REJECTED
    )
    return RunRecord(
        instance_id=instance.id,
        shots=instance.shots,
        mode=RunMode.CAIF,
        produced=None,
        failure=failure,
        per_field_match={name: False for name in MANDATORY_FIELDS},
        latency_s=latency,
        rounds_used=outcome.rounds_used,
        forwarded=False,
        harmful=False,  # blocked, never executed
    )


FAULT_MATRIX_KINDS = (FaultKind.DROP, FaultKind.PERTURB, FaultKind.CORRUPT)


@dataclass(frozen=True)
class FaultCase:
    kind: FaultKind
    field: str
    seed: int
    instance_index: int

    def plan(self) -> FaultPlan:
        return (Fault(kind=self.kind, field=self.field, at_call=0),)


def fault_matrix(
    instances: list[DatasetInstance], seeds: range | list[int] = range(10)
) -> list[FaultCase]:
    """{drop, perturb-once, corrupt-persistent} x {mandatory field} x seeds;
    each seed deterministically picks the instance the fault lands on."""
    cases: list[FaultCase] = []
    for seed in seeds:
        rng = random.Random(seed)
        for kind in FAULT_MATRIX_KINDS:
            for field_name in MANDATORY_FIELDS:
                cases.append(
                    FaultCase(
                        kind=kind,
                        field=field_name,
                        seed=seed,
                        instance_index=rng.randrange(len(instances)),
                    )
                )
    return cases


@dataclass
class MatrixOutcome:
    baseline_records: list[RunRecord] = field(default_factory=list)
    caif_records: list[RunRecord] = field(default_factory=list)

    @property
    def baseline_harmful(self) -> int:
        return sum(1 for r in self.baseline_records if r.harmful)

    @property
    def caif_harmful(self) -> int:
        return sum(1 for r in self.caif_records if r.harmful)


def run_fault_matrix(
    instances: list[DatasetInstance],
    catalog: dict[str, IntentSpecification],
    seeds: range | list[int] = range(10),
) -> MatrixOutcome:
    outcome = MatrixOutcome()
    for case in fault_matrix(instances, seeds):
        instance = instances[case.instance_index]
        plan = case.plan()
        outcome.baseline_records.append(run_baseline(instance, plan))
        outcome.caif_records.append(run_caif(instance, catalog, plan))
    return outcome
