"""Dual-agent intent translation pipeline with a pluggable LLM backend."""

from caif.pipeline.agents import (
    INTENT_SCHEMA,
    SchemaParseFailure,
    evaluate,
    profile,
    refine,
)
from caif.pipeline.backends import (
    Backend,
    BackendUnavailable,
    Fault,
    FaultKind,
    FaultPlan,
    MockBackend,
    RemoteBackend,
    extract_intent_fields,
    make_backend,
)
from caif.pipeline.pipeline import (
    DEFAULT_MAX_ROUNDS,
    IntentPipeline,
    OutcomeKind,
    PipelineOutcome,
    build_contract,
)
from caif.pipeline.prompts import (
    MissingTemplateVariable,
    PromptKind,
    format_conversation,
    render_prompt,
)
from caif.pipeline.types import (
    MANDATORY_FIELDS,
    Action,
    BackendConfig,
    BackendKind,
    Conversation,
    EvaluationReport,
    FieldViolation,
    Metric,
    Speaker,
    StructuredIntent,
    Turn,
    Verdict,
)

__all__ = [
    "Action",
    "Backend",
    "BackendConfig",
    "BackendKind",
    "BackendUnavailable",
    "Conversation",
    "DEFAULT_MAX_ROUNDS",
    "EvaluationReport",
    "Fault",
    "FaultKind",
    "FaultPlan",
    "FieldViolation",
    "INTENT_SCHEMA",
    "IntentPipeline",
    "MANDATORY_FIELDS",
    "Metric",
    "MissingTemplateVariable",
    "MockBackend",
    "OutcomeKind",
    "PipelineOutcome",
    "PromptKind",
    "RemoteBackend",
    "SchemaParseFailure",
    "Speaker",
    "StructuredIntent",
    "Turn",
    "Verdict",
    "build_contract",
    "evaluate",
    "extract_intent_fields",
    "format_conversation",
    "make_backend",
    "profile",
    "refine",
    "render_prompt",
]
