"""Non-RT rApps: SLA Slice rApp (target derivation + feasibility check)
and A1 Policy Handler (policy composition and dispatch)."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from enum import Enum
from typing import Protocol

import httpx

from caif.contracts.model import ContractState, Expectation, IntentContract
from caif.contracts.registry import ContractRegistry
from caif.nonrt.history import NoData, PerfHistoryStore
from caif.pipeline.types import Action
from caif.sim.cqi import slice_rate_per_prb

DEFAULT_DEADLINE_S = 300
DEFAULT_WINDOW_S = 60.0


class PolicyState(str, Enum):
    CREATED = "Created"
    ENFORCED = "Enforced"
    REPLACED = "Replaced"
    STOPPED = "Stopped"


@dataclass
class A1Policy:
    policy_id: str
    contract_id: str
    cell_id: int
    slice_id: int
    target_throughput_mbps: float
    deadline_s: int
    state: PolicyState = PolicyState.CREATED

    def to_json_dict(self) -> dict:
        return {
            "policy_id": self.policy_id,
            "contract_id": self.contract_id,
            "scope": {"cell_id": self.cell_id, "slice_id": self.slice_id},
            "target_throughput_mbps": self.target_throughput_mbps,
            "deadline_s": self.deadline_s,
            "state": self.state.value,
        }


class NonPositiveCurrent(ValueError):
    pass


class NoHistory(LookupError):
    pass


class DispatchFailure(ConnectionError):
    pass


@dataclass(frozen=True)
class Infeasible:
    reason: str


FEASIBLE = None  # feasibility_check returns None when feasible


def derive_target(current_mbps: float, action: Action, pct: float) -> int:
    """Absolute throughput target from a percentage change of the current
    level, rounded half-up to the nearest integer Mbps."""
    if current_mbps <= 0:
        raise NonPositiveCurrent(f"current throughput must be positive, got {current_mbps}")
    sign = -1.0 if action is Action.DECREASE else 1.0
    raw = current_mbps * (1.0 + sign * pct / 100.0)
    return math.floor(raw + 0.5)


def feasibility_check(
    store: PerfHistoryStore,
    cell_id: int,
    slice_id: int,
    target_mbps: float,
    cell_total_prb: int,
) -> Infeasible | None:
    """Compare the target against the best throughput the cell could reach
    per its observed history: total PRBs x best observed per-PRB rate."""
    entries = store.cell_entries(cell_id)
    usable = [e for e in entries if 1 <= e.avg_cqi <= 15]
    if not usable:
        raise NoHistory(f"no usable history for cell {cell_id}")
    achievable_max = max(cell_total_prb * slice_rate_per_prb(e.avg_cqi) for e in usable)
    if target_mbps <= 0:
        return Infeasible(f"target {target_mbps} Mbps is not positive")
    if target_mbps > achievable_max:
        return Infeasible(
            f"target {target_mbps} Mbps exceeds historically achievable "
            f"maximum {achievable_max:.2f} Mbps for cell {cell_id}"
        )
    return FEASIBLE


class A1Dispatcher(Protocol):
    def put_policy(self, policy: A1Policy) -> None: ...


class HttpA1Dispatcher:
    """JSON-over-HTTP PUT to the near-RT layer's A1 endpoint."""

    def __init__(self, base_url: str, timeout_s: float = 10.0, transport=None):
        self._base = base_url.rstrip("/")
        self._client = httpx.Client(timeout=timeout_s, transport=transport)

    def put_policy(self, policy: A1Policy) -> None:
        url = f"{self._base}/a1/policies/{policy.policy_id}"
        body = {
            "policy_id": policy.policy_id,
            "contract_id": policy.contract_id,
            "scope": {"cell_id": policy.cell_id, "slice_id": policy.slice_id},
            "target_throughput_mbps": policy.target_throughput_mbps,
            "deadline_s": policy.deadline_s,
        }
        try:
            response = self._client.put(url, json=body)
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise DispatchFailure(f"A1 PUT {url} failed: {exc}") from exc


class SlaSliceRapp:
    """Converts contract percentages into absolute throughput policies,
    gated by the PRB/CQI feasibility check over historical data."""

    def __init__(
        self,
        store: PerfHistoryStore,
        registry: ContractRegistry,
        dispatcher: A1Dispatcher,
        cell_total_prb: dict[int, int],
        window_s: float = DEFAULT_WINDOW_S,
    ):
        self._store = store
        self._registry = registry
        self._dispatcher = dispatcher
        self._cell_total_prb = cell_total_prb
        self._window_s = window_s
        self._counter = 0
        self._lock = threading.Lock()

    def _next_policy_id(self) -> str:
        with self._lock:
            self._counter += 1
            return f"pol-{self._counter:04d}"

    def build_and_dispatch_policy(self, contract: IntentContract) -> A1Policy:
        """Derive the absolute target, run the feasibility gate, activate
        the contract and dispatch the A1 policy.

        The gate runs while the contract is still Validated: infeasible
        contracts transition to Rejected and no policy is created. A
        dispatch failure leaves the contract Activated with a retry note.
        """
        state = contract.lifecycle.state
        if state not in (ContractState.VALIDATED, ContractState.ACTIVATED):
            raise ValueError(
                f"contract {contract.id} must be Validated or Activated, is {state.value}"
            )
        cell_id, slice_id = contract.scope()
        current = self._store.current_throughput(cell_id, slice_id, self._window_s)
        action = (
            Action.DECREASE
            if contract.expectation is Expectation.THROUGHPUT_REDUCTION
            else Action.INCREASE
        )
        target = derive_target(current, action, contract.target_value_pct)

        total_prb = self._cell_total_prb.get(cell_id)
        if total_prb is None:
            raise NoHistory(f"unknown cell {cell_id}: no capacity record")
        verdict = feasibility_check(self._store, cell_id, slice_id, target, total_prb)
        if verdict is not None:
            # only requests that pass the check move forward
            if state is ContractState.VALIDATED:
                self._registry.transition(contract.id, ContractState.REJECTED, verdict.reason)
            else:
                self._registry.annotate(contract.id, f"re-check infeasible: {verdict.reason}")
            raise FeasibilityRejected(contract.id, verdict.reason)

        if state is ContractState.VALIDATED:
            self._registry.transition(
                contract.id, ContractState.ACTIVATED, "feasibility passed"
            )

        deadline_ch = contract.characteristic("deadlineSeconds")
        deadline_s = int(deadline_ch.parsed_value()) if deadline_ch else DEFAULT_DEADLINE_S

        policy = A1Policy(
            policy_id=self._next_policy_id(),
            contract_id=contract.id,
            cell_id=cell_id,
            slice_id=slice_id,
            target_throughput_mbps=float(target),
            deadline_s=deadline_s,
        )
        try:
            self._dispatcher.put_policy(policy)
        except DispatchFailure:
            self._registry.annotate(
                contract.id, f"A1 dispatch of {policy.policy_id} failed; retry pending"
            )
            raise
        self._registry.bind_policy(contract.id, policy.policy_id)
        return policy


class FeasibilityRejected(ValueError):
    def __init__(self, contract_id: str, reason: str):
        self.contract_id = contract_id
        self.reason = reason
        super().__init__(f"contract {contract_id} infeasible: {reason}")
