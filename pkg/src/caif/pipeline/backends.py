"""Language-model backends for the intent agents.

``MockBackend`` is a deterministic, prompt-parsing stand-in for a hosted
model: it reads the same rendered prompts a remote model would receive,
extracts intent fields with a fixed pattern table, and can inject faults
(dropped fields, one-shot perturbations, persistent corruption, malformed
output) so the whole pipeline is testable offline.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Protocol

import httpx

from caif.pipeline.types import MANDATORY_FIELDS, Action, BackendConfig, Metric


class BackendUnavailable(ConnectionError):
    pass


class Backend(Protocol):
    def complete(self, prompt: str) -> str:
        """Return the model's raw text response for a rendered prompt."""
        ...


# --- deterministic extraction rules ----------------------------------------

_CELL = re.compile(r"\bcell(?:\s+id)?[\s_#]*(\d+)", re.IGNORECASE)
_SLICE = re.compile(r"\bslice(?:\s+id)?[\s_#]*(\d+)", re.IGNORECASE)
_PCT = re.compile(r"\bby\s+(\d+(?:\.\d+)?)\s*(?:%|percent)", re.IGNORECASE)
_BARE_PCT = re.compile(r"\b(\d+(?:\.\d+)?)\s*(?:%|percent)", re.IGNORECASE)
_DEADLINE = re.compile(r"\b(?:in|within)\s+(\d+)\s*(minutes?|mins?|seconds?|secs?)\b", re.IGNORECASE)
_DECREASE = re.compile(r"\b(decrease|reduce|lower|drop|cut)\b", re.IGNORECASE)
_INCREASE = re.compile(r"\b(increase|raise|boost|improve|enhance|grow)\b", re.IGNORECASE)
_DOWNLINK = re.compile(r"\b(downlink|dl)\b", re.IGNORECASE)
_UPLINK = re.compile(r"\b(uplink|ul)\b", re.IGNORECASE)
_THROUGHPUT = re.compile(r"\bthroughput\b", re.IGNORECASE)

_TURN_LINE = re.compile(r"^\[(\d+)\] (Operator|System): (.*)$")


def extract_intent_fields(
    operator_turns: list[tuple[int, str]],
) -> tuple[dict[str, Any], dict[str, int]]:
    """Pattern-based extraction over operator turns.

    Later turns override earlier values for the same field (iterative
    filling). Returns (fields, provenance turn index per field).
    """
    fields: dict[str, Any] = {}
    provenance: dict[str, int] = {}

    def put(name: str, value: Any, turn: int) -> None:
        fields[name] = value
        provenance[name] = turn

    for turn_idx, text in operator_turns:
        m = _CELL.search(text)
        if m and int(m.group(1)) > 0:
            put("cell_id", int(m.group(1)), turn_idx)
        m = _SLICE.search(text)
        if m and int(m.group(1)) > 0:
            put("slice_id", int(m.group(1)), turn_idx)
        m = _PCT.search(text) or _BARE_PCT.search(text)
        if m and 0 < float(m.group(1)) <= 100:
            put("magnitude_pct", float(m.group(1)), turn_idx)
        m = _DEADLINE.search(text)
        if m:
            amount = int(m.group(1))
            unit = m.group(2).lower()
            seconds = amount * 60 if unit.startswith("min") else amount
            if seconds > 0:
                put("deadline_s", seconds, turn_idx)
        if _DECREASE.search(text):
            put("action", Action.DECREASE.value, turn_idx)
        elif _INCREASE.search(text):
            put("action", Action.INCREASE.value, turn_idx)
        if _THROUGHPUT.search(text):
            if _UPLINK.search(text):
                put("metric", Metric.UPLINK_THROUGHPUT.value, turn_idx)
            elif _DOWNLINK.search(text):
                put("metric", Metric.DOWNLINK_THROUGHPUT.value, turn_idx)
    return fields, provenance


# --- fault injection ---------------------------------------------------------


class FaultKind(str, Enum):
    DROP = "drop"  # omit the field from one extraction call
    PERTURB = "perturb"  # wrong-but-schema-valid value on one call
    CORRUPT = "corrupt"  # wrong-but-schema-valid value on every call
    MALFORMED = "malformed"  # response is not valid JSON at all


@dataclass(frozen=True)
class Fault:
    kind: FaultKind
    field: str = ""
    at_call: int = 0  # extraction-call index for DROP/PERTURB/MALFORMED
    persistent: bool = False  # MALFORMED only: garble every call

    def applies(self, call_index: int) -> bool:
        if self.kind is FaultKind.CORRUPT or self.persistent:
            return True
        return call_index == self.at_call


FaultPlan = tuple[Fault, ...]


def _wrong_value(field_name: str, value: Any) -> Any:
    """Deterministic semantically-wrong but schema-valid substitute."""
    if field_name in ("cell_id", "slice_id"):
        return int(value) + 1
    if field_name == "magnitude_pct":
        return float(value) + 10 if float(value) <= 90 else float(value) - 10
    if field_name == "deadline_s":
        return int(value) * 2
    if field_name == "metric":
        return (
            Metric.UPLINK_THROUGHPUT.value
            if value == Metric.DOWNLINK_THROUGHPUT.value
            else Metric.DOWNLINK_THROUGHPUT.value
        )
    if field_name == "action":
        return Action.INCREASE.value if value == Action.DECREASE.value else Action.DECREASE.value
    raise ValueError(f"no perturbation rule for field {field_name!r}")


# --- prompt parsing helpers --------------------------------------------------


def _split_sections(prompt: str) -> dict[str, str]:
    sections: dict[str, list[str]] = {}
    current: str | None = None
    for line in prompt.splitlines():
        if line.startswith("## "):
            current = line[3:].strip()
            sections[current] = []
        elif current is not None:
            sections[current].append(line)
    return {name: "\n".join(lines).strip() for name, lines in sections.items()}


def _parse_turns(block: str) -> list[tuple[int, str, str]]:
    turns = []
    for line in block.splitlines():
        m = _TURN_LINE.match(line)
        if m:
            turns.append((int(m.group(1)), m.group(2), m.group(3)))
    return turns


@dataclass
class MockBackend:
    """Deterministic backend; identical prompts and fault plan give
    byte-identical responses."""

    fault_plan: FaultPlan = ()
    calls: int = field(default=0, init=False)

    def complete(self, prompt: str) -> str:
        sections = _split_sections(prompt)
        if "Evaluation report" in sections:
            return self._refine(sections)
        if "Candidate intent" in sections:
            return self._evaluate(sections)
        return self._extract(sections)

    # extraction-style calls (profiling + refinement) share the call counter
    def _next_call(self) -> int:
        index = self.calls
        self.calls += 1
        return index

    def _faulted_fields(
        self, fields: dict[str, Any], provenance: dict[str, int], call_index: int
    ) -> tuple[dict[str, Any], dict[str, int]]:
        out = dict(fields)
        prov = dict(provenance)
        for fault in self.fault_plan:
            if not fault.applies(call_index) or fault.field not in out:
                continue
            if fault.kind is FaultKind.DROP:
                del out[fault.field]
                prov.pop(fault.field, None)
            elif fault.kind in (FaultKind.PERTURB, FaultKind.CORRUPT):
                out[fault.field] = _wrong_value(fault.field, out[fault.field])
        return out, prov

    def _malformed(self, call_index: int) -> bool:
        return any(
            f.kind is FaultKind.MALFORMED and f.applies(call_index) for f in self.fault_plan
        )

    def _conversation(self, sections: dict[str, str]) -> list[tuple[int, str]]:
        block = sections.get("Conversation", "")
        return [(idx, text) for idx, speaker, text in _parse_turns(block) if speaker == "Operator"]

    def _extract(self, sections: dict[str, str]) -> str:
        call_index = self._next_call()
        if self._malformed(call_index):
            return "sorry, I cannot express that as JSON {{{"
        fields, provenance = extract_intent_fields(self._conversation(sections))
        fields, provenance = self._faulted_fields(fields, provenance, call_index)
        return json.dumps({"intent": fields, "provenance": provenance})

    def _refine(self, sections: dict[str, str]) -> str:
        call_index = self._next_call()
        if self._malformed(call_index):
            return "sorry, I cannot express that as JSON {{{"
        try:
            report = json.loads(sections.get("Evaluation report", "{}"))
        except json.JSONDecodeError:
            report = {}
        flagged = set(report.get("missing_fields", []))
        flagged.update(v.get("field", "") for v in report.get("violations", []))
        fields, provenance = extract_intent_fields(self._conversation(sections))
        fields, provenance = self._faulted_fields(fields, provenance, call_index)
        fields = {k: v for k, v in fields.items() if k in flagged}
        provenance = {k: v for k, v in provenance.items() if k in flagged}
        return json.dumps({"intent": fields, "provenance": provenance})

    def _evaluate(self, sections: dict[str, str]) -> str:
        # exact-match cross-check of the candidate against a clean
        # re-extraction of the conversation
        try:
            candidate = json.loads(sections.get("Candidate intent", "{}"))
        except json.JSONDecodeError:
            candidate = {}
        reference, ref_prov = extract_intent_fields(self._conversation(sections))
        missing: list[str] = []
        violations: list[dict[str, Any]] = []
        for name in MANDATORY_FIELDS:
            have = candidate.get(name)
            want = reference.get(name)
            if have is None:
                missing.append(name)
            elif want is None:
                violations.append(
                    {
                        "field": name,
                        "expected_evidence_turn": None,
                        "reason": "no supporting evidence in the conversation",
                    }
                )
            elif have != want:
                violations.append(
                    {
                        "field": name,
                        "expected_evidence_turn": ref_prov.get(name),
                        "reason": f"conversation evidence says {want!r}, candidate says {have!r}",
                    }
                )
        return json.dumps({"missing_fields": missing, "violations": violations})


class RemoteBackend:
    """Thin JSON-over-HTTP chat-completion client.

    Sends {model, temperature, top_p, messages} to the configured endpoint
    and returns the first choice's message content.
    """

    def __init__(self, config: BackendConfig, timeout_s: float = 60.0, transport=None):
        if config.endpoint is None:
            raise ValueError("RemoteBackend requires config.endpoint")
        self.config = config
        self._client = httpx.Client(timeout=timeout_s, transport=transport)

    def complete(self, prompt: str) -> str:
        payload = {
            "model": self.config.model_name,
            "temperature": self.config.temperature,
            "top_p": self.config.top_p,
            "messages": [{"role": "user", "content": prompt}],
        }
        try:
            response = self._client.post(self.config.endpoint, json=payload)
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise BackendUnavailable(f"remote backend at {self.config.endpoint}: {exc}") from exc
        body = response.json()
        try:
            return body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise BackendUnavailable(f"unexpected response shape: {body!r}") from exc

    def close(self) -> None:
        self._client.close()


def make_backend(config: BackendConfig, fault_plan: FaultPlan = ()) -> Backend:
    from caif.pipeline.types import BackendKind

    if config.backend is BackendKind.MOCK:
        return MockBackend(fault_plan=fault_plan)
    return RemoteBackend(config)
