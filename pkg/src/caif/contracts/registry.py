"""Contract lifecycle registry: registration, state transitions, conflict
detection. Safe for concurrent use from multiple sessions."""

from __future__ import annotations

import threading
import time
from typing import Callable, Iterable

from caif.contracts.model import (
    ACTIVE_STATES,
    ContractState,
    IntentContract,
    LifecycleState,
)


class UnknownContract(KeyError):
    pass


class DuplicateContract(ValueError):
    pass


class IllegalTransition(ValueError):
    def __init__(self, contract_id: str, current: ContractState, attempted: ContractState):
        self.contract_id = contract_id
        self.current = current
        self.attempted = attempted
        super().__init__(
            f"contract {contract_id}: illegal transition {current.value} -> {attempted.value}"
        )


def detect_conflict(contract: IntentContract, registry: Iterable[IntentContract]) -> list[str]:
    """Ids of active contracts whose target scope equals the candidate's."""
    return [
        other.id
        for other in registry
        if other.id != contract.id
        and other.lifecycle.state in ACTIVE_STATES
        and other.target == contract.target
    ]


class ContractRegistry:
    """Registers contracts and tracks them through their lifecycle.

    Each contract's history is serialized under a single registry lock;
    annotations carry non-transition notes (e.g. dispatch retry hints).
    """

    def __init__(self, clock: Callable[[], float] = time.time):
        self._lock = threading.Lock()
        self._contracts: dict[str, IntentContract] = {}
        self._annotations: dict[str, list[str]] = {}
        self._policy_ids: dict[str, str] = {}
        self._clock = clock

    def register(self, contract: IntentContract) -> str:
        with self._lock:
            if contract.id in self._contracts:
                raise DuplicateContract(contract.id)
            contract.lifecycle = LifecycleState(state=ContractState.RECEIVED)
            contract.lifecycle.history.append(
                (self._clock(), ContractState.RECEIVED, "registered")
            )
            self._contracts[contract.id] = contract
            return contract.id

    def get(self, contract_id: str) -> IntentContract:
        with self._lock:
            try:
                return self._contracts[contract_id]
            except KeyError:
                raise UnknownContract(contract_id) from None

    def all(self) -> list[IntentContract]:
        with self._lock:
            return list(self._contracts.values())

    def transition(
        self, contract_id: str, new_state: ContractState, reason: str = ""
    ) -> LifecycleState:
        with self._lock:
            contract = self._contracts.get(contract_id)
            if contract is None:
                raise UnknownContract(contract_id)
            if not contract.lifecycle.can_move_to(new_state):
                raise IllegalTransition(contract_id, contract.lifecycle.state, new_state)
            contract.lifecycle.move_to(new_state, reason, self._clock())
            return contract.lifecycle

    def annotate(self, contract_id: str, note: str) -> None:
        with self._lock:
            if contract_id not in self._contracts:
                raise UnknownContract(contract_id)
            self._annotations.setdefault(contract_id, []).append(note)

    def annotations(self, contract_id: str) -> list[str]:
        with self._lock:
            return list(self._annotations.get(contract_id, []))

    def bind_policy(self, contract_id: str, policy_id: str) -> None:
        with self._lock:
            if contract_id not in self._contracts:
                raise UnknownContract(contract_id)
            self._policy_ids[contract_id] = policy_id

    def policy_id(self, contract_id: str) -> str | None:
        with self._lock:
            return self._policy_ids.get(contract_id)

    def conflicts_with(self, contract: IntentContract) -> list[str]:
        with self._lock:
            return detect_conflict(contract, self._contracts.values())
