"""Closed-loop intent translation: profile -> evaluate -> refine until the
evaluation passes, then contract generation, validation and registration.

No contract is ever emitted without passing both the evaluation and the
contract validation.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable

from caif.contracts.model import (
    Characteristic,
    Expectation,
    IntentContract,
    IntentSpecification,
    PolicyMechanism,
    Relationship,
    ValueType,
)
from caif.contracts.registry import ContractRegistry
from caif.contracts.validation import ValidationResult, validate_contract
from caif.pipeline.agents import SchemaParseFailure, evaluate, profile, refine
from caif.pipeline.backends import Backend
from caif.pipeline.types import (
    Action,
    Conversation,
    EvaluationReport,
    StructuredIntent,
    Verdict,
)

DEFAULT_SPECIFICATION_ID = "slaSliceSpec"
DEFAULT_RELATIONSHIP = Relationship("policy-baseline", "baseline")
DEFAULT_MAX_ROUNDS = 3


class OutcomeKind(str, Enum):
    CONTRACT = "Contract"
    NEEDS_CLARIFICATION = "NeedsClarification"
    REJECTED = "Rejected"


@dataclass
class PipelineOutcome:
    kind: OutcomeKind
    contract: IntentContract | None = None
    intent: StructuredIntent | None = None
    question: str | None = None
    missing_fields: list[str] = field(default_factory=list)
    report: EvaluationReport | None = None
    validation: ValidationResult | None = None
    rounds_used: int = 0
    trace: list[dict[str, Any]] = field(default_factory=list)


def build_contract(
    intent: StructuredIntent,
    session_id: str,
    specification_id: str = DEFAULT_SPECIFICATION_ID,
    created_at: float = 0.0,
) -> IntentContract:
    """Compile a complete structured intent into an Intent Contract."""
    if not intent.is_complete():
        raise ValueError(f"intent incomplete, unset fields: {intent.unset_fields()}")
    target = f"Cell_{intent.cell_id}_Slice_{intent.slice_id}"
    expectation = (
        Expectation.THROUGHPUT_REDUCTION
        if intent.action is Action.DECREASE
        else Expectation.THROUGHPUT_ENHANCEMENT
    )
    digest_src = json.dumps({"session": session_id, **intent.field_values()}, sort_keys=True)
    contract_id = "intent-" + hashlib.sha256(digest_src.encode()).hexdigest()[:12]
    return IntentContract(
        id=contract_id,
        target=target,
        expectation=expectation,
        target_value_pct=float(intent.magnitude_pct),
        policy_mechanism=PolicyMechanism.TWO_LEVEL_RRM_POLICY_RATIO,
        specification_id=specification_id,
        relationship=DEFAULT_RELATIONSHIP,
        characteristics=[
            Characteristic("eligibleClusters", "affectedCells", ValueType.STRING, target),
            Characteristic("deadline", "deadlineSeconds", ValueType.INTEGER, str(intent.deadline_s)),
            Characteristic("kpi", "targetKpi", ValueType.STRING, intent.metric.value),
        ],
        created_at=created_at,
    )


def _clarification_question(missing: list[str]) -> str:
    phrasing = {
        "cell_id": "which cell the intent applies to",
        "slice_id": "which slice the intent applies to",
        "metric": "whether the intent concerns downlink or uplink throughput",
        "action": "whether throughput should be increased or decreased",
        "magnitude_pct": "the percentage change you want",
        "deadline_s": "the deadline for reaching the target",
    }
    parts = [phrasing.get(m, m) for m in missing]
    return "Please clarify " + "; ".join(parts) + "."


class IntentPipeline:
    """Dual-agent translation pipeline with a distinct backend per agent."""

    def __init__(
        self,
        profiling_backend: Backend,
        evaluator_backend: Backend,
        catalog: dict[str, IntentSpecification],
        registry: ContractRegistry | None = None,
        max_rounds: int = DEFAULT_MAX_ROUNDS,
        specification_id: str = DEFAULT_SPECIFICATION_ID,
        template_dir: str | Path | None = None,
        clock: Callable[[], float] = time.time,
    ):
        if max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if not catalog:
            raise ValueError("catalog must be non-empty")
        self.profiling_backend = profiling_backend
        self.evaluator_backend = evaluator_backend
        self.catalog = catalog
        self.registry = registry
        self.max_rounds = max_rounds
        self.specification_id = specification_id
        self.template_dir = template_dir
        self.clock = clock

    def run(self, conversation: Conversation) -> PipelineOutcome:
        trace: list[dict[str, Any]] = []

        def record(step: str, payload: Any) -> None:
            trace.append({"step": step, "payload": payload})

        try:
            intent = profile(conversation, self.profiling_backend, self.template_dir)
        except SchemaParseFailure as exc:
            record("profile_failed", str(exc))
            return PipelineOutcome(
                kind=OutcomeKind.REJECTED,
                question=f"backend output unusable: {exc}",
                rounds_used=0,
                trace=trace,
            )
        record("profile", intent.field_values())

        rounds_used = 0
        while True:
            report = evaluate(
                intent,
                conversation,
                self.catalog,
                self.evaluator_backend,
                self.specification_id,
                self.template_dir,
            )
            record("evaluate", report.to_json_dict())
            if report.verdict is Verdict.PASS:
                break
            if rounds_used >= self.max_rounds:
                return PipelineOutcome(
                    kind=OutcomeKind.REJECTED,
                    intent=intent,
                    report=report,
                    rounds_used=rounds_used,
                    trace=trace,
                )
            try:
                refined = refine(
                    intent, report, conversation, self.profiling_backend, self.template_dir
                )
            except SchemaParseFailure as exc:
                record("refine_failed", str(exc))
                return PipelineOutcome(
                    kind=OutcomeKind.REJECTED,
                    intent=intent,
                    report=report,
                    rounds_used=rounds_used,
                    trace=trace,
                )
            rounds_used += 1
            record("refine", refined.field_values())

            still_missing = [
                f for f in report.missing_fields if getattr(refined, f) is None
            ]
            if still_missing:
                # evidence genuinely absent: ask the operator instead of
                # burning refinement rounds
                return PipelineOutcome(
                    kind=OutcomeKind.NEEDS_CLARIFICATION,
                    intent=refined,
                    question=_clarification_question(still_missing),
                    missing_fields=still_missing,
                    report=report,
                    rounds_used=rounds_used,
                    trace=trace,
                )
            intent = refined

        contract = build_contract(
            intent, conversation.session_id, self.specification_id, created_at=self.clock()
        )
        validation = validate_contract(contract, self.catalog)
        record("validate_contract", [v.reason for v in validation.violations])
        if not validation.ok:
            return PipelineOutcome(
                kind=OutcomeKind.REJECTED,
                intent=intent,
                validation=validation,
                rounds_used=rounds_used,
                trace=trace,
            )
        if self.registry is not None:
            self.registry.register(contract)
        record("contract", contract.id)
        return PipelineOutcome(
            kind=OutcomeKind.CONTRACT,
            contract=contract,
            intent=intent,
            rounds_used=rounds_used,
            trace=trace,
        )
