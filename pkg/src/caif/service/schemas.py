"""Pydantic request/response models for the gateway API."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field

from caif.service.engine import Session


class TurnIn(BaseModel):
    text: str = Field(min_length=1)


class TurnOut(BaseModel):
    speaker: str
    text: str
    timestamp: float


class SessionView(BaseModel):
    session_id: str
    pipeline_status: str
    conversation: list[TurnOut]
    contract_id: Optional[str] = None
    policy_id: Optional[str] = None
    rejection: Optional[dict[str, Any]] = None

    @classmethod
    def from_session(cls, session: Session) -> "SessionView":
        rejection: dict[str, Any] | None = None
        outcome = session.last_outcome
        if outcome is not None and session.status.value == "Rejected":
            rejection = {}
            if outcome.report is not None:
                rejection["evaluation"] = outcome.report.to_json_dict()
            if outcome.validation is not None:
                rejection["validation"] = [
                    {"field": v.field, "reason": v.reason} for v in outcome.validation.violations
                ]
            if outcome.question:
                rejection["detail"] = outcome.question
        return cls(
            session_id=session.session_id,
            pipeline_status=session.status.value,
            conversation=[
                TurnOut(speaker=t.speaker.value, text=t.text, timestamp=t.timestamp)
                for t in session.conversation.turns
            ],
            contract_id=session.contract_id,
            policy_id=session.policy_id,
            rejection=rejection,
        )


class PolicyScope(BaseModel):
    cell_id: int = Field(ge=1)
    slice_id: int = Field(ge=1)


class A1PolicyIn(BaseModel):
    policy_id: Optional[str] = None  # path id wins when omitted
    contract_id: str = ""
    scope: PolicyScope
    target_throughput_mbps: float
    deadline_s: int


class PolicyOut(BaseModel):
    policy_id: str
    contract_id: str
    scope: PolicyScope
    target_throughput_mbps: float
    deadline_s: int
    state: str


class RatioOut(BaseModel):
    cell_id: int
    slice_id: int
    min_ratio_pct: int
    max_ratio_pct: int


class StateOut(BaseModel):
    tick: int
    ratios: list[RatioOut]
    policies: list[PolicyOut]
    contracts: list[dict[str, Any]]
