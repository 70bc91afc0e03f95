"""FastAPI gateway: operator sessions, contract activation, policy control,
A1 endpoint, live metrics event stream."""

from __future__ import annotations

import asyncio
import json
from contextlib import asynccontextmanager
from typing import Any

from fastapi import FastAPI, HTTPException
from fastapi.responses import StreamingResponse

from caif.contracts.registry import IllegalTransition, UnknownContract
from caif.nearrt.xapps import AlreadyTerminal, MalformedPolicy, UnknownPolicy
from caif.nonrt.history import NoData
from caif.nonrt.rapps import A1Policy, DispatchFailure, FeasibilityRejected, NoHistory
from caif.contracts.jsonld import serialize_contract
from caif.service.engine import Engine
from caif.service.schemas import (
    A1PolicyIn,
    PolicyOut,
    PolicyScope,
    SessionView,
    StateOut,
    TurnIn,
)


def _policy_out(policy: A1Policy) -> PolicyOut:
    return PolicyOut(
        policy_id=policy.policy_id,
        contract_id=policy.contract_id,
        scope=PolicyScope(cell_id=policy.cell_id, slice_id=policy.slice_id),
        target_throughput_mbps=policy.target_throughput_mbps,
        deadline_s=policy.deadline_s,
        state=policy.state.value,
    )


def create_app(engine: Engine | None = None, auto_tick: bool = True) -> FastAPI:
    engine = engine or Engine()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        ticker: asyncio.Task | None = None
        if auto_tick:
            ticker = asyncio.create_task(_tick_loop(engine))
        yield
        if ticker is not None:
            ticker.cancel()

    async def _tick_loop(engine: Engine) -> None:
        interval = max(engine.config.tick_interval_s, 0.0)
        while True:
            engine.step()
            await asyncio.sleep(interval)

    app = FastAPI(title="caif-gateway", lifespan=lifespan)
    app.state.engine = engine

    # --- operator sessions ---------------------------------------------------

    @app.post("/sessions", response_model=SessionView)
    def create_session() -> SessionView:
        return SessionView.from_session(engine.create_session())

    @app.get("/sessions/{session_id}", response_model=SessionView)
    def get_session(session_id: str) -> SessionView:
        try:
            return SessionView.from_session(engine.get_session(session_id))
        except KeyError:
            raise HTTPException(404, f"unknown session {session_id}") from None

    @app.post("/sessions/{session_id}/turns", response_model=SessionView)
    def submit_turn(session_id: str, turn: TurnIn) -> SessionView:
        try:
            session = engine.submit_turn(session_id, turn.text)
        except KeyError:
            raise HTTPException(404, f"unknown session {session_id}") from None
        return SessionView.from_session(session)

    # --- contracts -------------------------------------------------------------

    @app.get("/contracts/{contract_id}")
    def get_contract(contract_id: str) -> dict[str, Any]:
        try:
            return serialize_contract(engine.contract(contract_id))
        except UnknownContract:
            raise HTTPException(404, f"unknown contract {contract_id}") from None

    @app.post("/contracts/{contract_id}:activate", response_model=PolicyOut)
    def activate_contract(contract_id: str) -> PolicyOut:
        try:
            policy = engine.activate_contract(contract_id)
        except UnknownContract:
            raise HTTPException(404, f"unknown contract {contract_id}") from None
        except FeasibilityRejected as exc:
            raise HTTPException(422, str(exc)) from None
        except IllegalTransition as exc:
            raise HTTPException(409, str(exc)) from None
        except ValueError as exc:
            raise HTTPException(409, str(exc)) from None
        except (NoData, NoHistory) as exc:
            raise HTTPException(409, f"insufficient telemetry: {exc}") from None
        except DispatchFailure as exc:
            raise HTTPException(502, str(exc)) from None
        return _policy_out(policy)

    # --- policies ---------------------------------------------------------------

    @app.delete("/policies/{policy_id}", response_model=PolicyOut)
    def stop_policy(policy_id: str) -> PolicyOut:
        try:
            return _policy_out(engine.stop_policy(policy_id))
        except UnknownPolicy:
            raise HTTPException(404, f"unknown policy {policy_id}") from None
        except AlreadyTerminal as exc:
            raise HTTPException(409, str(exc)) from None

    @app.get("/policies/{policy_id}", response_model=PolicyOut)
    def get_policy(policy_id: str) -> PolicyOut:
        try:
            return _policy_out(engine.policies.policy(policy_id))
        except UnknownPolicy:
            raise HTTPException(404, f"unknown policy {policy_id}") from None

    # --- A1 endpoint (near-RT side) ----------------------------------------------

    @app.put("/a1/policies/{policy_id}", response_model=PolicyOut)
    def a1_put(policy_id: str, body: A1PolicyIn) -> PolicyOut:
        policy = A1Policy(
            policy_id=body.policy_id or policy_id,
            contract_id=body.contract_id,
            cell_id=body.scope.cell_id,
            slice_id=body.scope.slice_id,
            target_throughput_mbps=body.target_throughput_mbps,
            deadline_s=body.deadline_s,
        )
        try:
            return _policy_out(engine.policies.a1_receive(policy))
        except MalformedPolicy as exc:
            raise HTTPException(422, str(exc)) from None

    @app.delete("/a1/policies/{policy_id}", response_model=PolicyOut)
    def a1_delete(policy_id: str) -> PolicyOut:
        return stop_policy(policy_id)

    # --- state and metrics stream ---------------------------------------------------

    @app.get("/state", response_model=StateOut)
    def get_state() -> StateOut:
        return StateOut(**engine.state_snapshot())

    @app.get("/metrics/stream")
    async def metrics_stream() -> StreamingResponse:
        queue: asyncio.Queue[dict[str, Any]] = asyncio.Queue(maxsize=4096)
        loop = asyncio.get_running_loop()

        def listener(kind: str, event: dict[str, Any]) -> None:
            try:
                loop.call_soon_threadsafe(queue.put_nowait, event)
            except RuntimeError:
                pass  # loop shutting down

        engine.add_listener(listener)

        async def stream():
            # client disconnect cancels this generator; the finally block
            # always unsubscribes the listener
            try:
                while True:
                    try:
                        event = await asyncio.wait_for(queue.get(), timeout=1.0)
                    except asyncio.TimeoutError:
                        yield ": keepalive\n\n"
                        continue
                    yield f"event: {event['kind']}\ndata: {json.dumps(event)}\n\n"
            finally:
                engine.remove_listener(listener)

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app
