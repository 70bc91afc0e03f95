"""Profiling, evaluation and refinement agents over a pluggable backend."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema

from caif.contracts.model import IntentSpecification
from caif.pipeline.backends import Backend
from caif.pipeline.prompts import PromptKind, format_conversation, render_prompt
from caif.pipeline.types import (
    MANDATORY_FIELDS,
    Conversation,
    EvaluationReport,
    FieldViolation,
    StructuredIntent,
)

# Envelope schema for extraction-style backend responses. Strict: unknown
# fields or out-of-range values are rejected, then re-asked once.
INTENT_SCHEMA: dict[str, Any] = {
    "type": "object",
    "properties": {
        "intent": {
            "type": "object",
            "properties": {
                "cell_id": {"type": "integer", "minimum": 1},
                "slice_id": {"type": "integer", "minimum": 1},
                "metric": {"enum": ["DownlinkThroughput", "UplinkThroughput"]},
                "action": {"enum": ["Increase", "Decrease"]},
                "magnitude_pct": {"type": "number", "exclusiveMinimum": 0, "maximum": 100},
                "deadline_s": {"type": "integer", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "provenance": {
            "type": "object",
            "additionalProperties": {"type": "integer", "minimum": 0},
        },
    },
    "required": ["intent"],
    "additionalProperties": False,
}

EVALUATION_SCHEMA: dict[str, Any] = {
    "type": "object",
    "properties": {
        "missing_fields": {"type": "array", "items": {"enum": list(MANDATORY_FIELDS)}},
        "violations": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "field": {"enum": list(MANDATORY_FIELDS)},
                    "expected_evidence_turn": {"type": ["integer", "null"]},
                    "reason": {"type": "string"},
                },
                "required": ["field", "reason"],
            },
        },
    },
    "required": ["missing_fields", "violations"],
}


class SchemaParseFailure(ValueError):
    """Backend output failed schema validation even after one re-ask."""


def _conversation_context(conversation: Conversation) -> str:
    return format_conversation([(t.speaker.value, t.text) for t in conversation.turns])


def _ask_json(backend: Backend, prompt: str, schema: dict[str, Any]) -> dict[str, Any]:
    """One backend call with a single re-ask on schema-invalid output."""
    last_error = ""
    for _ in range(2):
        raw = backend.complete(prompt)
        try:
            parsed = json.loads(raw)
            jsonschema.validate(parsed, schema)
            return parsed
        except (json.JSONDecodeError, jsonschema.ValidationError) as exc:
            last_error = str(exc)
    raise SchemaParseFailure(f"backend output invalid after re-ask: {last_error}")


def profile(
    conversation: Conversation,
    backend: Backend,
    template_dir: str | Path | None = None,
) -> StructuredIntent:
    """Extract a (possibly partial) structured intent from the conversation."""
    conversation.validate()
    prompt = render_prompt(
        PromptKind.PROFILING,
        {
            "conversation": _conversation_context(conversation),
            "schema": INTENT_SCHEMA["properties"]["intent"],
        },
        template_dir,
    )
    parsed = _ask_json(backend, prompt, INTENT_SCHEMA)
    # provenance must index real turns; anything else from the backend is dropped
    provenance = {
        name: turn
        for name, turn in (parsed.get("provenance") or {}).items()
        if 0 <= int(turn) < len(conversation.turns)
    }
    return StructuredIntent.from_fields(parsed["intent"], provenance)


def evaluate(
    intent: StructuredIntent,
    conversation: Conversation,
    catalog: dict[str, IntentSpecification],
    backend: Backend,
    specification_id: str = "slaSliceSpec",
    template_dir: str | Path | None = None,
) -> EvaluationReport:
    """Cross-check the intent against the conversation and catalog bounds."""
    prompt = render_prompt(
        PromptKind.EVALUATION,
        {
            "conversation": _conversation_context(conversation),
            "intent": intent.field_values(),
            "schema": INTENT_SCHEMA["properties"]["intent"],
        },
        template_dir,
    )
    parsed = _ask_json(backend, prompt, EVALUATION_SCHEMA)

    report = EvaluationReport()
    seen: set[str] = set()
    for name in parsed["missing_fields"]:
        if name not in seen:
            report.missing_fields.append(name)
            seen.add(name)
    for v in parsed["violations"]:
        report.violations.append(
            FieldViolation(v["field"], v.get("expected_evidence_turn"), v["reason"])
        )

    # deterministic catalog-bound checks, independent of the backend
    spec = catalog.get(specification_id)
    if spec is not None and intent.magnitude_pct is not None:
        lo, hi = spec.pct_bounds
        if not (lo <= intent.magnitude_pct <= hi):
            report.violations.append(
                FieldViolation(
                    "magnitude_pct",
                    None,
                    f"outside specification bounds [{lo}, {hi}]",
                )
            )
    return report


def refine(
    intent: StructuredIntent,
    report: EvaluationReport,
    conversation: Conversation,
    backend: Backend,
    template_dir: str | Path | None = None,
) -> StructuredIntent:
    """Re-extract only the flagged fields; everything else is preserved
    bit-identically. Flagged fields without evidence come back unset."""
    flagged = report.flagged_fields()
    if not flagged:
        raise ValueError("refine requires a failing evaluation report")
    prompt = render_prompt(
        PromptKind.REFINEMENT,
        {
            "conversation": _conversation_context(conversation),
            "intent": intent.field_values(),
            "report": report.to_json_dict(),
            "schema": INTENT_SCHEMA["properties"]["intent"],
        },
        template_dir,
    )
    parsed = _ask_json(backend, prompt, INTENT_SCHEMA)

    refined = intent.copy()
    response_fields = parsed["intent"]
    response_prov = parsed.get("provenance", {})
    patch = StructuredIntent.from_fields(response_fields, response_prov)
    # locality is enforced here, not trusted to the backend: only flagged
    # fields may change
    for name in flagged:
        if name in response_fields:
            setattr(refined, name, getattr(patch, name))
            if name in response_prov:
                refined.provenance[name] = int(response_prov[name])
        else:
            setattr(refined, name, None)
            refined.provenance.pop(name, None)
    return refined
