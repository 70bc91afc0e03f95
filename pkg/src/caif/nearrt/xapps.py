"""Near-RT xApps: A1 mediator, SLA Slice control loops, RC actuation.

One cooperative control-loop task exists per enforced policy; loops are
driven at tick boundaries and stop issuing controls the moment their
policy is replaced or stopped (the final ratio persists on the RAN).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Protocol

from caif.contracts.model import ContractState
from caif.nearrt.controller import ControllerState, GainConfig, control_step
from caif.nearrt.metrics import MetricsDb
from caif.nonrt.rapps import A1Policy, PolicyState
from caif.sim.simulator import InvariantViolation
from caif.sim.types import RrmPolicyRatio

STALE_TICKS = 5


class MalformedPolicy(ValueError):
    pass


class UnknownPolicy(KeyError):
    pass


class AlreadyTerminal(ValueError):
    pass


class RanControl(Protocol):
    """E2-analog control surface of the RAN (the simulator)."""

    def apply_ratio_control(self, cell_id: int, slice_id: int, ratio: RrmPolicyRatio) -> None: ...

    def current_ratio(self, cell_id: int, slice_id: int) -> RrmPolicyRatio: ...


ContractEventHook = Callable[[str, ContractState, str], None]
EventSink = Callable[[str, dict[str, Any]], None]


@dataclass
class ControlLoop:
    """SLA Slice xApp loop for one enforced policy."""

    policy: A1Policy
    state: ControllerState
    started_tick: int
    tick_s: float = 1.0
    active: bool = True
    paused: bool = False
    fulfilled: bool = False
    last_report_tick: int = field(init=False)
    control_messages: int = 0

    def __post_init__(self) -> None:
        self.last_report_tick = self.started_tick

    def deadline_tick(self) -> int:
        return self.started_tick + int(self.policy.deadline_s / self.tick_s)


class PolicyRegistry:
    """A1 mediator plus per-cell policy bookkeeping.

    At most one policy is Enforced per cell: a new policy for a cell
    replaces the enforced one and halts its loop the same tick.
    """

    def __init__(
        self,
        ran: RanControl,
        metrics: MetricsDb,
        contract_events: ContractEventHook | None = None,
        event_sink: EventSink | None = None,
        gains: GainConfig | None = None,
        tick_s: float = 1.0,
        clock: Callable[[], int] | None = None,
    ):
        self._ran = ran
        self._metrics = metrics
        self._contract_events = contract_events or (lambda *_: None)
        self._emit = event_sink or (lambda *_: None)
        self._gains = gains or GainConfig()
        self._tick_s = tick_s
        self._lock = threading.RLock()
        self._policies: dict[str, A1Policy] = {}
        self._loops: dict[str, ControlLoop] = {}
        self._enforced_by_cell: dict[int, str] = {}
        self.now_tick = 0
        self._clock = clock or (lambda: self.now_tick)

    # --- A1 endpoint -------------------------------------------------------

    def a1_receive(self, policy: A1Policy) -> A1Policy:
        with self._lock:
            if policy.policy_id in self._policies:
                raise MalformedPolicy(f"duplicate policy_id {policy.policy_id}")
            if policy.target_throughput_mbps <= 0:
                raise MalformedPolicy("target_throughput_mbps must be positive")
            if policy.deadline_s <= 0:
                raise MalformedPolicy("deadline_s must be positive")
            try:
                current = self._ran.current_ratio(policy.cell_id, policy.slice_id)
            except KeyError:
                raise MalformedPolicy(
                    f"unknown scope (cell {policy.cell_id}, slice {policy.slice_id})"
                ) from None

            now = self._clock()
            replaced_id = self._enforced_by_cell.get(policy.cell_id)
            if replaced_id is not None:
                self._halt(
                    replaced_id, PolicyState.REPLACED, f"replaced by {policy.policy_id}", now
                )

            policy.state = PolicyState.ENFORCED
            self._policies[policy.policy_id] = policy
            self._enforced_by_cell[policy.cell_id] = policy.policy_id
            self._loops[policy.policy_id] = ControlLoop(
                policy=policy,
                state=ControllerState(
                    policy=policy,
                    current_ratio=current,
                    k_p=self._gains.k_p,
                    deadband_frac=self._gains.deadband_frac,
                    step_cap_pts=self._gains.step_cap_pts,
                    guard_band_pts=self._gains.guard_band_pts,
                ),
                started_tick=now,
                tick_s=self._tick_s,
            )
            self._emit(
                "policy_enforced",
                {"policy": policy.to_json_dict(), "tick": now},
            )
            return policy

    def stop_policy(self, policy_id: str) -> A1Policy:
        with self._lock:
            policy = self._policies.get(policy_id)
            if policy is None:
                raise UnknownPolicy(policy_id)
            if policy.state is not PolicyState.ENFORCED:
                raise AlreadyTerminal(f"policy {policy_id} is {policy.state.value}")
            self._halt(policy_id, PolicyState.STOPPED, "stopped by operator", self._clock())
            self._contract_events(policy.contract_id, ContractState.STOPPED, "policy stopped")
            return policy

    def _halt(self, policy_id: str, new_state: PolicyState, reason: str, tick: int) -> None:
        policy = self._policies[policy_id]
        policy.state = new_state
        loop = self._loops.get(policy_id)
        if loop is not None:
            loop.active = False
        if self._enforced_by_cell.get(policy.cell_id) == policy_id:
            del self._enforced_by_cell[policy.cell_id]
        event = "policy_replaced" if new_state is PolicyState.REPLACED else "policy_stopped"
        self._emit(event, {"policy": policy.to_json_dict(), "tick": tick, "reason": reason})
        if new_state is PolicyState.REPLACED:
            self._contract_events(policy.contract_id, ContractState.STOPPED, reason)

    # --- queries -----------------------------------------------------------

    def policy(self, policy_id: str) -> A1Policy:
        with self._lock:
            try:
                return self._policies[policy_id]
            except KeyError:
                raise UnknownPolicy(policy_id) from None

    def policies(self) -> list[A1Policy]:
        with self._lock:
            return list(self._policies.values())

    def enforced(self) -> list[A1Policy]:
        with self._lock:
            return [
                self._policies[pid] for pid in sorted(self._enforced_by_cell.values())
            ]

    def loop(self, policy_id: str) -> ControlLoop | None:
        with self._lock:
            return self._loops.get(policy_id)

    # --- tick-driven control -----------------------------------------------

    def on_tick(self, now_tick: int) -> None:
        """Run every active loop once for this tick (KPIMON read ->
        control_step -> RC actuation)."""
        with self._lock:
            self.now_tick = now_tick
            for policy_id in sorted(self._loops):
                loop = self._loops[policy_id]
                if loop.active:
                    self._loop_tick(loop, now_tick)

    def _loop_tick(self, loop: ControlLoop, now_tick: int) -> None:
        policy = loop.policy
        if now_tick >= loop.deadline_tick():
            self._halt(policy.policy_id, PolicyState.STOPPED, "deadline reached", now_tick)
            self._contract_events(
                policy.contract_id, ContractState.STOPPED, "policy deadline reached"
            )
            return

        report = self._metrics.latest(policy.cell_id, policy.slice_id)
        if report is None or now_tick - report.tick > STALE_TICKS:
            if not loop.paused:
                loop.paused = True
                loop.fulfilled = False
                self._contract_events(
                    policy.contract_id,
                    ContractState.DEGRADED,
                    f"no KPM report for > {STALE_TICKS} ticks",
                )
            return
        if loop.paused:
            loop.paused = False
        loop.last_report_tick = report.tick

        measured = report.dl_throughput_mbps
        goal = policy.target_throughput_mbps
        in_deadband = abs((goal - measured) / goal) <= loop.state.deadband_frac
        if in_deadband and not loop.fulfilled:
            loop.fulfilled = True
            self._contract_events(
                policy.contract_id, ContractState.FULFILLED, f"throughput within deadband of {goal}"
            )

        new_ratio = control_step(loop.state, measured)
        if new_ratio is None:
            return
        try:
            self._ran.apply_ratio_control(policy.cell_id, policy.slice_id, new_ratio)
        except InvariantViolation as exc:
            self._emit(
                "control_rejected",
                {"policy_id": policy.policy_id, "tick": now_tick, "reason": str(exc)},
            )
            return
        loop.state.current_ratio = new_ratio
        loop.control_messages += 1
        self._emit(
            "ratio_applied",
            {
                "policy_id": policy.policy_id,
                "tick": now_tick,
                "cell_id": policy.cell_id,
                "slice_id": policy.slice_id,
                "min_ratio_pct": new_ratio.min_ratio_pct,
                "max_ratio_pct": new_ratio.max_ratio_pct,
            },
        )
