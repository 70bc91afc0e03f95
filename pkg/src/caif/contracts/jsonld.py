"""JSON-LD (de)serialization of Intent Contracts.

Keys are prefix-literal (``icm:``/``ran:``/``idan:`` carried as plain
strings); no RDF expansion is performed.
"""

from __future__ import annotations

import json
from typing import Any

from caif.contracts.model import (
    Characteristic,
    ContractState,
    Expectation,
    IntentContract,
    LifecycleState,
    PolicyMechanism,
    Relationship,
    ValueType,
)

CONTEXT = {
    "icm": "urn:caif:intent-common-model#",
    "ran": "urn:caif:ran-extension#",
    "idan": "urn:caif:intent-delivery#",
}

KEY_ID = "id"
KEY_TARGET = "icm:target"
KEY_EXPECTATION = "icm:hasExpectation"
KEY_TARGET_VALUE = "ran:targetThroughputIncreasement"
KEY_MECHANISM = "idan:Delivery_slaPolicy"
KEY_SPECIFICATION = "icm:intentSpecification"
KEY_RELATIONSHIP = "icm:intentRelationship"
KEY_CHARACTERISTIC = "characteristic"
KEY_LIFECYCLE = "lifecycle"
KEY_CREATED_AT = "createdAt"

MANDATORY_KEYS = (
    KEY_ID,
    KEY_TARGET,
    KEY_EXPECTATION,
    KEY_TARGET_VALUE,
    KEY_MECHANISM,
    KEY_SPECIFICATION,
    KEY_RELATIONSHIP,
    KEY_CHARACTERISTIC,
)


class ParseError(ValueError):
    """Raised on malformed documents; carries the JSON path of the defect."""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


def serialize_contract(contract: IntentContract) -> dict[str, Any]:
    """Render a contract as a JSON-LD dict (``json.dumps``-ready)."""
    return {
        "@context": dict(CONTEXT),
        "@type": "icm:Intent",
        KEY_ID: contract.id,
        KEY_TARGET: contract.target,
        KEY_EXPECTATION: contract.expectation.value,
        KEY_TARGET_VALUE: contract.target_value_pct,
        KEY_MECHANISM: contract.policy_mechanism.value,
        KEY_SPECIFICATION: contract.specification_id,
        KEY_RELATIONSHIP: {
            "id": contract.relationship.related_id,
            "kind": contract.relationship.relationship_kind,
        },
        KEY_CHARACTERISTIC: [
            {
                "id": ch.id,
                "name": ch.name,
                "valueType": ch.value_type.value,
                "value": ch.value,
            }
            for ch in contract.characteristics
        ],
        KEY_LIFECYCLE: {
            "state": contract.lifecycle.state.value,
            "history": [
                {"timestamp": ts, "state": st.value, "reason": reason}
                for ts, st, reason in contract.lifecycle.history
            ],
        },
        KEY_CREATED_AT: contract.created_at,
    }


def serialize_contract_text(contract: IntentContract) -> str:
    return json.dumps(serialize_contract(contract), indent=2)


def _require(doc: dict[str, Any], key: str, kind: type, path: str = "$") -> Any:
    if key not in doc:
        raise ParseError(f"{path}.{key}", "mandatory field missing")
    value = doc[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError(f"{path}.{key}", f"expected number, got {type(value).__name__}")
        return float(value)
    if not isinstance(value, kind):
        raise ParseError(f"{path}.{key}", f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def _parse_enum(enum_cls: type, raw: str, path: str) -> Any:
    try:
        return enum_cls(raw)
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)  # type: ignore[attr-defined]
        raise ParseError(path, f"unknown value {raw!r} (allowed: {allowed})") from None


def _parse_characteristic(raw: Any, path: str) -> Characteristic:
    if not isinstance(raw, dict):
        raise ParseError(path, "characteristic must be an object")
    return Characteristic(
        id=_require(raw, "id", str, path),
        name=_require(raw, "name", str, path),
        value_type=_parse_enum(ValueType, _require(raw, "valueType", str, path), f"{path}.valueType"),
        value=_require(raw, "value", str, path),
    )


def _parse_lifecycle(raw: Any, path: str) -> LifecycleState:
    if not isinstance(raw, dict):
        raise ParseError(path, "lifecycle must be an object")
    state = _parse_enum(ContractState, _require(raw, "state", str, path), f"{path}.state")
    history: list[tuple[float, ContractState, str]] = []
    for i, entry in enumerate(raw.get("history", [])):
        epath = f"{path}.history[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(epath, "history entry must be an object")
        history.append(
            (
                _require(entry, "timestamp", float, epath),
                _parse_enum(ContractState, _require(entry, "state", str, epath), f"{epath}.state"),
                _require(entry, "reason", str, epath),
            )
        )
    return LifecycleState(state=state, history=history)


def parse_contract(document: dict[str, Any] | str) -> IntentContract:
    """Parse a JSON-LD contract document (dict or JSON text).

    Raises ParseError naming the JSON path of the first malformed or
    missing mandatory field.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError("$", f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc
    if not isinstance(document, dict):
        raise ParseError("$", "document root must be an object")

    rel_raw = _require(document, KEY_RELATIONSHIP, dict)
    relationship = Relationship(
        related_id=_require(rel_raw, "id", str, f"$.{KEY_RELATIONSHIP}"),
        relationship_kind=_require(rel_raw, "kind", str, f"$.{KEY_RELATIONSHIP}"),
    )

    chars_raw = _require(document, KEY_CHARACTERISTIC, list)
    characteristics = [
        _parse_characteristic(raw, f"$.{KEY_CHARACTERISTIC}[{i}]")
        for i, raw in enumerate(chars_raw)
    ]

    lifecycle = (
        _parse_lifecycle(document[KEY_LIFECYCLE], f"$.{KEY_LIFECYCLE}")
        if KEY_LIFECYCLE in document
        else LifecycleState()
    )

    return IntentContract(
        id=_require(document, KEY_ID, str),
        target=_require(document, KEY_TARGET, str),
        expectation=_parse_enum(
            Expectation, _require(document, KEY_EXPECTATION, str), f"$.{KEY_EXPECTATION}"
        ),
        target_value_pct=_require(document, KEY_TARGET_VALUE, float),
        policy_mechanism=_parse_enum(
            PolicyMechanism, _require(document, KEY_MECHANISM, str), f"$.{KEY_MECHANISM}"
        ),
        specification_id=_require(document, KEY_SPECIFICATION, str),
        relationship=relationship,
        characteristics=characteristics,
        lifecycle=lifecycle,
        created_at=float(document.get(KEY_CREATED_AT, 0.0)),
    )
