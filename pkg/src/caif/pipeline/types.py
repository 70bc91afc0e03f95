"""Domain types for the intent translation pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any


class Speaker(str, Enum):
    OPERATOR = "Operator"
    SYSTEM = "System"


class Metric(str, Enum):
    DOWNLINK_THROUGHPUT = "DownlinkThroughput"
    UPLINK_THROUGHPUT = "UplinkThroughput"


class Action(str, Enum):
    INCREASE = "Increase"
    DECREASE = "Decrease"


@dataclass(frozen=True)
class Turn:
    speaker: Speaker
    text: str
    timestamp: float = 0.0


@dataclass
class Conversation:
    session_id: str
    turns: list[Turn] = field(default_factory=list)

    def add(self, speaker: Speaker, text: str, timestamp: float | None = None) -> None:
        if timestamp is None:
            timestamp = self.turns[-1].timestamp + 1.0 if self.turns else 0.0
        if self.turns and timestamp < self.turns[-1].timestamp:
            raise ValueError("turns must be ordered by timestamp")
        self.turns.append(Turn(speaker, text, timestamp))

    def operator_turns(self) -> list[tuple[int, str]]:
        return [(i, t.text) for i, t in enumerate(self.turns) if t.speaker is Speaker.OPERATOR]

    def validate(self) -> None:
        if not any(t.speaker is Speaker.OPERATOR for t in self.turns):
            raise ValueError("conversation must contain at least one Operator turn")
        stamps = [t.timestamp for t in self.turns]
        if stamps != sorted(stamps):
            raise ValueError("turns must be ordered by timestamp")


MANDATORY_FIELDS = ("cell_id", "slice_id", "metric", "action", "magnitude_pct", "deadline_s")


@dataclass
class StructuredIntent:
    """Machine-readable extraction of a conversation; None means unset."""

    cell_id: int | None = None
    slice_id: int | None = None
    metric: Metric | None = None
    action: Action | None = None
    magnitude_pct: float | None = None
    deadline_s: int | None = None
    provenance: dict[str, int] = field(default_factory=dict)

    def unset_fields(self) -> list[str]:
        return [f for f in MANDATORY_FIELDS if getattr(self, f) is None]

    def is_complete(self) -> bool:
        return not self.unset_fields()

    def get(self, field_name: str) -> Any:
        return getattr(self, field_name)

    def copy(self) -> "StructuredIntent":
        return replace(self, provenance=dict(self.provenance))

    def field_values(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for f in MANDATORY_FIELDS:
            v = getattr(self, f)
            if v is not None:
                out[f] = v.value if isinstance(v, Enum) else v
        return out

    @classmethod
    def from_fields(
        cls, fields_dict: dict[str, Any], provenance: dict[str, int] | None = None
    ) -> "StructuredIntent":
        intent = cls(provenance=dict(provenance or {}))
        for name, value in fields_dict.items():
            if name not in MANDATORY_FIELDS or value is None:
                continue
            if name == "metric":
                value = Metric(value)
            elif name == "action":
                value = Action(value)
            elif name in ("cell_id", "slice_id", "deadline_s"):
                value = int(value)
            elif name == "magnitude_pct":
                value = float(value)
            setattr(intent, name, value)
        return intent


class Verdict(str, Enum):
    PASS = "Pass"
    FAIL = "Fail"


@dataclass(frozen=True)
class FieldViolation:
    field: str
    expected_evidence_turn: int | None
    reason: str


@dataclass
class EvaluationReport:
    missing_fields: list[str] = field(default_factory=list)
    violations: list[FieldViolation] = field(default_factory=list)

    @property
    def verdict(self) -> Verdict:
        return Verdict.PASS if not self.missing_fields and not self.violations else Verdict.FAIL

    def flagged_fields(self) -> set[str]:
        return set(self.missing_fields) | {v.field for v in self.violations}

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "missing_fields": list(self.missing_fields),
            "violations": [
                {
                    "field": v.field,
                    "expected_evidence_turn": v.expected_evidence_turn,
                    "reason": v.reason,
                }
                for v in self.violations
            ],
        }


class BackendKind(str, Enum):
    MOCK = "Mock"
    REMOTE = "Remote"


@dataclass(frozen=True)
class BackendConfig:
    backend: BackendKind = BackendKind.MOCK
    model_name: str = "mock"
    temperature: float = 0.6
    top_p: float = 0.95
    endpoint: str | None = None

    def __post_init__(self) -> None:
        if not (0 <= self.temperature <= 2):
            raise ValueError(f"temperature must be in [0, 2], got {self.temperature}")
        if not (0 < self.top_p <= 1):
            raise ValueError(f"top_p must be in (0, 1], got {self.top_p}")
        if self.backend is BackendKind.REMOTE and not self.endpoint:
            raise ValueError("Remote backend requires an endpoint URL")
