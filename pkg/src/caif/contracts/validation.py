"""Deterministic schema/constraint validation of contracts against the
intent-specification catalog.

Every failed check is reported; validation never short-circuits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fnmatch import fnmatchcase

from caif.contracts.model import TARGET_PATTERN, IntentContract, IntentSpecification


@dataclass(frozen=True)
class Violation:
    field: str
    reason: str


@dataclass
class ValidationResult:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, field_name: str, reason: str) -> None:
        self.violations.append(Violation(field_name, reason))


def validate_contract(
    contract: IntentContract, catalog: dict[str, IntentSpecification]
) -> ValidationResult:
    """Check type invariants plus the bounds/sets of the referenced
    IntentSpecification. Returns every violation found."""
    if not catalog:
        raise ValueError("catalog must be non-empty")

    result = ValidationResult()

    target_ok = TARGET_PATTERN.match(contract.target) is not None
    if not target_ok:
        result.add("target", "must match Cell_<cellId>_Slice_<sliceId> with positive integer ids")

    if not (0 < contract.target_value_pct <= 100):
        result.add("target_value_pct", "out of bounds: must be in (0, 100]")

    affected = [ch for ch in contract.characteristics if ch.name == "affectedCells"]
    if len(affected) != 1:
        result.add(
            "characteristics",
            f"exactly one characteristic named affectedCells required, found {len(affected)}",
        )
    elif affected[0].value != contract.target:
        result.add("characteristics", "affectedCells value must equal target")

    for i, ch in enumerate(contract.characteristics):
        try:
            ch.parsed_value()
        except ValueError:
            result.add(
                f"characteristics[{i}]",
                f"value {ch.value!r} does not parse as {ch.value_type.value}",
            )

    spec = catalog.get(contract.specification_id)
    if spec is None:
        result.add(
            "specification_id",
            f"unknown specification {contract.specification_id!r}: not in catalog",
        )
        return result

    if contract.expectation not in spec.allowed_expectations:
        result.add("expectation", f"{contract.expectation.value} not allowed by specification")

    if target_ok and not any(fnmatchcase(contract.target, pat) for pat in spec.allowed_targets):
        result.add("target", "not allowed by specification")

    lo, hi = spec.pct_bounds
    if 0 < contract.target_value_pct <= 100 and not (lo <= contract.target_value_pct <= hi):
        result.add(
            "target_value_pct",
            f"outside specification bounds [{lo}, {hi}]",
        )

    if contract.policy_mechanism not in spec.allowed_mechanisms:
        result.add(
            "policy_mechanism", f"{contract.policy_mechanism.value} not allowed by specification"
        )

    return result
