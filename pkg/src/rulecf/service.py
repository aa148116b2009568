"""Session-oriented HTTP service.

Each session persists as one directory holding the scenario document and
an append-only event log; restarting the service reconstructs identical
live state by replaying both.  Event injection is serialized per session
while explanation requests run on immutable snapshots.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import engine, pipeline
from .engine import Event, SystemState, firing_to_dict, state_to_dict
from .errors import (
    NoCandidatesError,
    NoExplanandumError,
    RulecfError,
    SessionNotFoundError,
    UnachievableFoilError,
)
from .model import Scenario, history_entry_to_dict, parse_scenario
from .scoring import RankingConfig


@dataclass
class Session:
    id: str
    scenario: Scenario
    state: SystemState
    history: list
    created_at: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._load_existing()

    def _session_dir(self, session_id: str) -> Path:
        return self.data_dir / session_id

    def _load_existing(self):
        for path in sorted(self.data_dir.iterdir()) if self.data_dir.exists() else []:
            scenario_file = path / "scenario.json"
            if not scenario_file.is_file():
                continue
            scenario = parse_scenario(scenario_file.read_text())
            session = self._build(path.name, scenario)
            events_file = path / "events.ndjson"
            if events_file.is_file():
                for line in events_file.read_text().splitlines():
                    if line.strip():
                        self._apply(session, engine.parse_event(json.loads(line)))
            self._sessions[session.id] = session

    def _build(self, session_id: str, scenario: Scenario) -> Session:
        state, history = pipeline.live_state(scenario)
        return Session(id=session_id, scenario=scenario, state=state, history=history)

    @staticmethod
    def _apply(session: Session, event: Event) -> engine.StepResult:
        result = engine.step(session.scenario, session.state, event)
        session.state = result.state
        session.history.extend(result.new_history)
        return result

    def create(self, scenario_text: str) -> Session:
        scenario = parse_scenario(scenario_text)
        session_id = uuid.uuid4().hex[:12]
        session_dir = self._session_dir(session_id)
        session_dir.mkdir(parents=True)
        (session_dir / "scenario.json").write_text(scenario_text)
        (session_dir / "events.ndjson").write_text("")
        session = self._build(session_id, scenario)
        with self._lock:
            self._sessions[session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise SessionNotFoundError(f"unknown session {session_id!r}") from None

    def inject_event(self, session_id: str, event: Event) -> engine.StepResult:
        session = self.get(session_id)
        with session.lock:
            result = self._apply(session, event)
            line = json.dumps(
                {
                    "entity": event.entity,
                    "value": event.value,
                    "advance_ms": event.advance_ms,
                }
            )
            with (self._session_dir(session_id) / "events.ndjson").open("a") as fh:
                fh.write(line + "\n")
        return result

    def snapshot(self, session_id: str) -> tuple[Scenario, SystemState, list]:
        session = self.get(session_id)
        with session.lock:
            return session.scenario, session.state, list(session.history)


class EventBody(BaseModel):
    entity: str | None = None
    value: str | None = None
    advance_ms: int = 0


class ExplanationBody(BaseModel):
    device: str
    foil: str
    kind: str = "counterfactual"
    config: dict | None = None


_HTTP_STATUS = {
    SessionNotFoundError: 404,
    NoExplanandumError: 422,
    NoCandidatesError: 422,
    UnachievableFoilError: 422,
}


def create_app(data_dir: str | Path, config: RankingConfig | None = None) -> FastAPI:
    store = SessionStore(data_dir)
    base_config = config or RankingConfig()
    app = FastAPI(title="rulecf")
    app.state.store = store
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RulecfError)
    async def handle_rulecf_error(request: Request, exc: RulecfError):
        status = _HTTP_STATUS.get(type(exc), 400)
        return JSONResponse(
            status_code=status,
            content={"error": exc.code, "message": exc.message, "details": exc.details},
        )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "sessions": len(store._sessions)}

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        body = await request.body()
        session = store.create(body.decode("utf-8"))
        return {"id": session.id}

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str):
        scenario, state, _ = store.snapshot(session_id)
        rules = [
            {
                "id": r.id,
                "priority": r.priority,
                "active": engine.is_active(r, state),
            }
            for r in scenario.rules
        ]
        entities = [
            {
                "id": e.id,
                "name": e.noun_phrase(),
                "domain": list(e.domain),
                "controllability": e.controllability.value,
                "value": state.values[e.id],
                "last_changed": state.last_changed.get(e.id),
            }
            for e in scenario.entities
        ]
        return {"state": state_to_dict(state), "entities": entities, "rules": rules}

    @app.get("/sessions/{session_id}/history")
    def get_history(session_id: str):
        _, _, history = store.snapshot(session_id)
        return {"history": [history_entry_to_dict(h) for h in history]}

    @app.post("/sessions/{session_id}/events")
    def post_event(session_id: str, body: EventBody):
        result = store.inject_event(
            session_id,
            Event(entity=body.entity, value=body.value, advance_ms=body.advance_ms),
        )
        return {
            "state": state_to_dict(result.state),
            "firings": [firing_to_dict(f) for f in result.firings],
            "new_history": [history_entry_to_dict(h) for h in result.new_history],
        }

    @app.post("/sessions/{session_id}/explanations")
    def post_explanation(session_id: str, body: ExplanationBody):
        scenario, state, history = store.snapshot(session_id)
        req_config = base_config
        if body.config:
            req_config = RankingConfig(
                weights=tuple(body.config.get("weights", base_config.weights)),
                sparsity_cap=body.config.get("sparsity_cap", base_config.sparsity_cap),
                temporality_sentinel=body.config.get(
                    "temporality_sentinel", base_config.temporality_sentinel
                ),
            )
        return pipeline.explain(
            scenario,
            body.device,
            body.foil,
            kind=body.kind,
            config=req_config,
            state=state,
            history=history,
        )

    return app
