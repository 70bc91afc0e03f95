"""Domain types for Intent Contracts and their lifecycle."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

TARGET_PATTERN = re.compile(r"^Cell_([1-9]\d*)_Slice_([1-9]\d*)$")


class Expectation(str, Enum):
    THROUGHPUT_ENHANCEMENT = "ThroughputEnhancement"
    THROUGHPUT_REDUCTION = "ThroughputReduction"


class PolicyMechanism(str, Enum):
    TWO_LEVEL_RRM_POLICY_RATIO = "TwoLevelRrmPolicyRatio"


class ValueType(str, Enum):
    STRING = "string"
    INTEGER = "integer"
    DECIMAL = "decimal"


class ContractState(str, Enum):
    RECEIVED = "Received"
    VALIDATED = "Validated"
    ACTIVATED = "Activated"
    FULFILLED = "Fulfilled"
    DEGRADED = "Degraded"
    STOPPED = "Stopped"
    REJECTED = "Rejected"


# Legal lifecycle moves; anything not listed is an IllegalTransition.
TRANSITION_TABLE: dict[ContractState, frozenset[ContractState]] = {
    ContractState.RECEIVED: frozenset({ContractState.VALIDATED, ContractState.REJECTED}),
    ContractState.VALIDATED: frozenset({ContractState.ACTIVATED, ContractState.REJECTED}),
    ContractState.ACTIVATED: frozenset(
        {ContractState.FULFILLED, ContractState.DEGRADED, ContractState.STOPPED}
    ),
    ContractState.FULFILLED: frozenset({ContractState.DEGRADED, ContractState.STOPPED}),
    ContractState.DEGRADED: frozenset({ContractState.FULFILLED, ContractState.STOPPED}),
    ContractState.STOPPED: frozenset(),
    ContractState.REJECTED: frozenset(),
}

ACTIVE_STATES = frozenset(
    {ContractState.ACTIVATED, ContractState.FULFILLED, ContractState.DEGRADED}
)


@dataclass
class LifecycleState:
    """Current state plus an append-only (timestamp, state, reason) history."""

    state: ContractState = ContractState.RECEIVED
    history: list[tuple[float, ContractState, str]] = field(default_factory=list)

    def can_move_to(self, new_state: ContractState) -> bool:
        return new_state in TRANSITION_TABLE[self.state]

    def move_to(self, new_state: ContractState, reason: str, timestamp: float) -> None:
        if not self.can_move_to(new_state):
            raise ValueError(f"illegal transition {self.state.value} -> {new_state.value}")
        self.state = new_state
        self.history.append((timestamp, new_state, reason))


@dataclass(frozen=True)
class Characteristic:
    """Flattened contract attribute for low-latency lookup by rApps/xApps."""

    id: str
    name: str
    value_type: ValueType
    value: str

    def parsed_value(self) -> str | int | float:
        if self.value_type is ValueType.INTEGER:
            return int(self.value)
        if self.value_type is ValueType.DECIMAL:
            return float(self.value)
        return self.value


@dataclass(frozen=True)
class Relationship:
    related_id: str
    relationship_kind: str


@dataclass
class IntentContract:
    id: str
    target: str
    expectation: Expectation
    target_value_pct: float
    policy_mechanism: PolicyMechanism
    specification_id: str
    relationship: Relationship
    characteristics: list[Characteristic]
    lifecycle: LifecycleState = field(default_factory=LifecycleState)
    created_at: float = 0.0

    def scope(self) -> tuple[int, int]:
        """(cell_id, slice_id) parsed from the target resource identifier."""
        m = TARGET_PATTERN.match(self.target)
        if m is None:
            raise ValueError(f"target {self.target!r} is not a Cell_<n>_Slice_<m> identifier")
        return int(m.group(1)), int(m.group(2))

    def characteristic(self, name: str) -> Characteristic | None:
        for ch in self.characteristics:
            if ch.name == name:
                return ch
        return None


@dataclass(frozen=True)
class IntentSpecification:
    """Catalog entry declaring what the system is allowed to do."""

    id: str
    allowed_expectations: frozenset[Expectation]
    allowed_targets: tuple[str, ...]  # glob patterns over resource identifiers
    pct_bounds: tuple[float, float]  # (min_pct, max_pct], both in (0, 100]
    allowed_mechanisms: frozenset[PolicyMechanism]

    def __post_init__(self) -> None:
        lo, hi = self.pct_bounds
        if not (0 < lo < hi <= 100):
            raise ValueError(f"pct_bounds must satisfy 0 < min < max <= 100, got {self.pct_bounds}")
