"""Single-process wiring of pipeline, contract registry, rApps, near-RT
layer and simulator, advanced one simulated second per step."""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable

from caif.contracts.catalog import load_catalog
from caif.contracts.model import ContractState, IntentContract
from caif.contracts.registry import (
    ContractRegistry,
    DuplicateContract,
    IllegalTransition,
    UnknownContract,
)
from caif.nearrt.metrics import MetricsDb
from caif.nearrt.xapps import PolicyRegistry
from caif.nonrt.history import PerfHistoryStore
from caif.nonrt.rapps import A1Policy, SlaSliceRapp
from caif.pipeline.backends import make_backend
from caif.pipeline.pipeline import IntentPipeline, OutcomeKind, PipelineOutcome
from caif.pipeline.types import Conversation, Speaker
from caif.service.config import AppConfig
from caif.sim.scenario_io import load_scenario
from caif.sim.simulator import RanSimulator
from caif.sim.types import KpmReport

EventListener = Callable[[str, dict[str, Any]], None]


class SessionStatus(str, Enum):
    IDLE = "Idle"
    AWAITING_CLARIFICATION = "AwaitingClarification"
    CONTRACT_READY = "ContractReady"
    REJECTED = "Rejected"


@dataclass
class Session:
    session_id: str
    conversation: Conversation
    status: SessionStatus = SessionStatus.IDLE
    contract_id: str | None = None
    policy_id: str | None = None
    last_outcome: PipelineOutcome | None = None


@dataclass
class StepResult:
    tick: int
    reports: list[KpmReport] = field(default_factory=list)
    events: list[dict[str, Any]] = field(default_factory=list)


class InProcessA1:
    """Direct in-process dispatch into the near-RT A1 mediator."""

    def __init__(self) -> None:
        self.registry: PolicyRegistry | None = None

    def put_policy(self, policy: A1Policy) -> None:
        assert self.registry is not None, "A1 dispatcher not wired"
        self.registry.a1_receive(policy)


class Engine:
    """Owns all components and the simulated clock."""

    def __init__(self, config: AppConfig | None = None):
        self.config = config or AppConfig()
        self.catalog = load_catalog(self.config.catalog_path)
        self.scenario = load_scenario(self.config.scenario_path)
        self.sim = RanSimulator(self.scenario, seed=self.config.sim_seed)
        self.metrics = MetricsDb()
        self.history = PerfHistoryStore(
            tick_s=self.scenario.tick_s,
            persist_path=self.config.history_path,
        )
        self._kpm_sink = (
            open(self.config.kpm_stream_path, "a", encoding="utf-8")
            if self.config.kpm_stream_path
            else None
        )
        self.contracts = ContractRegistry(clock=self.now)
        self._listeners: list[EventListener] = []
        self.event_log: list[dict[str, Any]] = []
        self._step_lock = threading.Lock()
        self._tick_in_progress: int | None = None

        self.policies = PolicyRegistry(
            ran=self.sim,
            metrics=self.metrics,
            contract_events=self._on_contract_event,
            event_sink=self._emit,
            gains=self.config.gains,
            tick_s=self.scenario.tick_s,
            clock=lambda: self.sim.tick_count,
        )
        self._a1 = InProcessA1()
        self._a1.registry = self.policies
        self.rapp = SlaSliceRapp(
            store=self.history,
            registry=self.contracts,
            dispatcher=self._a1,
            cell_total_prb={c.cell_id: c.total_prb for c in self.scenario.cells},
            window_s=self.config.window_s,
        )
        self.pipeline = IntentPipeline(
            profiling_backend=make_backend(self.config.profiling_backend),
            evaluator_backend=make_backend(self.config.evaluator_backend),
            catalog=self.catalog,
            registry=self.contracts,
            max_rounds=self.config.max_rounds,
            template_dir=self.config.template_dir,
            clock=self.now,
        )
        self.sessions: dict[str, Session] = {}
        self._session_locks: dict[str, threading.Lock] = {}

    # --- clock and events ----------------------------------------------------

    def now(self) -> float:
        return self.sim.tick_count * self.scenario.tick_s

    def add_listener(self, listener: EventListener) -> None:
        self._listeners.append(listener)

    def remove_listener(self, listener: EventListener) -> None:
        if listener in self._listeners:
            self._listeners.remove(listener)

    def _emit(self, kind: str, payload: dict[str, Any]) -> None:
        tick = (
            self._tick_in_progress
            if self._tick_in_progress is not None
            else self.sim.tick_count
        )
        event = {"kind": kind, "tick": tick, **payload}
        self.event_log.append(event)
        for listener in list(self._listeners):
            listener(kind, event)

    def _on_contract_event(self, contract_id: str, state: ContractState, reason: str) -> None:
        try:
            self.contracts.transition(contract_id, state, reason)
        except UnknownContract:
            pass  # externally injected A1 policies have no local contract
        except IllegalTransition:
            # loop callbacks may race operator actions; the registry's
            # transition table stays authoritative
            self.contracts.annotate(contract_id, f"skipped transition to {state.value}: {reason}")
        self._emit(
            "contract_state",
            {"contract_id": contract_id, "state": state.value, "reason": reason},
        )

    # --- simulation loop -------------------------------------------------------

    def step(self) -> StepResult:
        """Advance one tick: RAN -> KPIMON/O1 ingest -> control loops."""
        with self._step_lock:
            log_start = len(self.event_log)
            tick = self.sim.tick_count
            self._tick_in_progress = tick
            try:
                reports = self.sim.tick()
                self.metrics.kpimon_ingest(reports)
                self.history.ingest_o1(reports)
                self.policies.on_tick(tick)
                if self._kpm_sink is not None:
                    for r in reports:
                        self._kpm_sink.write(json.dumps(r.to_json_dict()) + "\n")
                    self._kpm_sink.flush()
                self._emit("kpm", {"reports": [r.to_json_dict() for r in reports]})
            finally:
                self._tick_in_progress = None
            return StepResult(
                tick=tick, reports=reports, events=self.event_log[log_start:]
            )

    def run_ticks(self, n: int) -> list[StepResult]:
        return [self.step() for _ in range(n)]

    # --- operator sessions -----------------------------------------------------

    def create_session(self) -> Session:
        session_id = uuid.uuid4().hex[:12]
        session = Session(
            session_id=session_id, conversation=Conversation(session_id=session_id)
        )
        self.sessions[session_id] = session
        self._session_locks[session_id] = threading.Lock()
        return session

    def get_session(self, session_id: str) -> Session:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise KeyError(f"unknown session {session_id}") from None

    def submit_turn(self, session_id: str, text: str) -> Session:
        """Append an operator turn and advance the translation pipeline.

        A session's pipeline steps are strictly sequential; concurrent turns
        for the same session serialize on its lock.
        """
        session = self.get_session(session_id)
        with self._session_locks[session_id]:
            return self._submit_turn_locked(session, text)

    def _submit_turn_locked(self, session: Session, text: str) -> Session:
        session_id = session.session_id
        session.conversation.add(Speaker.OPERATOR, text, timestamp=self.now())
        if session.status is SessionStatus.CONTRACT_READY:
            return session  # contract already produced; nothing to re-run

        try:
            outcome = self.pipeline.run(session.conversation)
        except DuplicateContract:
            return session
        session.last_outcome = outcome
        if outcome.kind is OutcomeKind.CONTRACT:
            session.status = SessionStatus.CONTRACT_READY
            session.contract_id = outcome.contract.id
            self.contracts.transition(
                outcome.contract.id, ContractState.VALIDATED, "pipeline validation passed"
            )
            self._emit(
                "contract_ready",
                {"session_id": session_id, "contract_id": outcome.contract.id},
            )
        elif outcome.kind is OutcomeKind.NEEDS_CLARIFICATION:
            session.status = SessionStatus.AWAITING_CLARIFICATION
            session.conversation.add(Speaker.SYSTEM, outcome.question or "", timestamp=self.now())
        else:
            session.status = SessionStatus.REJECTED
        return session

    # --- contract activation and policy control --------------------------------

    def activate_contract(self, contract_id: str) -> A1Policy:
        """Feasibility-gate and dispatch the contract's A1 policy.

        Same-target active contracts are stopped first (superseded).
        """
        contract = self.contracts.get(contract_id)
        if self.contracts.policy_id(contract_id) is not None:
            raise ValueError(f"contract {contract_id} already has a dispatched policy")
        for conflict_id in self.contracts.conflicts_with(contract):
            self.contracts.transition(
                conflict_id, ContractState.STOPPED, f"superseded by {contract_id}"
            )
        policy = self.rapp.build_and_dispatch_policy(contract)
        for session in self.sessions.values():
            if session.contract_id == contract_id:
                session.policy_id = policy.policy_id
        return policy

    def stop_policy(self, policy_id: str) -> A1Policy:
        return self.policies.stop_policy(policy_id)

    def contract(self, contract_id: str) -> IntentContract:
        return self.contracts.get(contract_id)

    def state_snapshot(self) -> dict[str, Any]:
        ratios = self.sim.ratios()
        return {
            "tick": self.sim.tick_count,
            "ratios": [
                {
                    "cell_id": cell_id,
                    "slice_id": slice_id,
                    "min_ratio_pct": ratio.min_ratio_pct,
                    "max_ratio_pct": ratio.max_ratio_pct,
                }
                for (cell_id, slice_id), ratio in sorted(ratios.items())
            ],
            "policies": [p.to_json_dict() for p in self.policies.policies()],
            "contracts": [
                {
                    "id": c.id,
                    "target": c.target,
                    "state": c.lifecycle.state.value,
                    "policy_id": self.contracts.policy_id(c.id),
                }
                for c in self.contracts.all()
            ],
        }

    def close(self) -> None:
        self.history.close()
        if self._kpm_sink is not None:
            self._kpm_sink.close()
            self._kpm_sink = None
