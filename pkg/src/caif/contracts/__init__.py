"""Intent Contract data model, JSON-LD serialization, validation, catalog
and the lifecycle registry."""

from caif.contracts.catalog import load_catalog
from caif.contracts.jsonld import ParseError, parse_contract, serialize_contract
from caif.contracts.model import (
    Characteristic,
    ContractState,
    Expectation,
    IntentContract,
    IntentSpecification,
    LifecycleState,
    PolicyMechanism,
    Relationship,
    ValueType,
)
from caif.contracts.registry import (
    ContractRegistry,
    DuplicateContract,
    IllegalTransition,
    UnknownContract,
    detect_conflict,
)
from caif.contracts.validation import ValidationResult, Violation, validate_contract

__all__ = [
    "Characteristic",
    "ContractRegistry",
    "ContractState",
    "DuplicateContract",
    "Expectation",
    "IllegalTransition",
    "IntentContract",
    "IntentSpecification",
    "LifecycleState",
    "ParseError",
    "PolicyMechanism",
    "Relationship",
    "UnknownContract",
    "ValidationResult",
    "ValueType",
    "Violation",
    "detect_conflict",
    "load_catalog",
    "parse_contract",
    "serialize_contract",
    "validate_contract",
]
