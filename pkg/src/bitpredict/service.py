"""HTTP JSON API around game sessions.

Endpoints (all deterministic given the session seed and request inputs):

* POST /sessions                 create a session from a spec
* POST /sessions/{id}/commit     draw + commit the computer's bit
* POST /sessions/{id}/round      submit the human bit, reveal the round
* GET  /sessions/{id}            session state (never leaks pending bits)
* GET  /sessions/{id}/transcript JSONL download of the round records
* GET  /sessions/{id}/report     predictability statistics

Distinct sessions may be exercised concurrently; operations on one
session are serialized behind its lock.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .game import (
    GameSession,
    ProtocolError,
    StakesConfig,
    create_session,
    export_transcript,
    session_report,
    transcript_to_jsonl,
)
from .predictors import PredictorSpec


class StakesBody(BaseModel):
    stake: float = 1.0
    jackpot: float = 25.0
    broke: float = -25.0


class CreateSessionBody(BaseModel):
    predictor: dict | None = None
    depth: int = Field(default=3, ge=1, le=8)
    stakes: StakesBody = StakesBody()
    seed: int = 0
    window_width: int = Field(default=125, ge=2)
    choose: str = "fixed"


class RoundBody(BaseModel):
    bit: int = Field(ge=0, le=1)


class SessionStore:
    def __init__(self):
        self._sessions: dict[str, GameSession] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def add(self, session: GameSession) -> None:
        with self._registry_lock:
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()

    def get(self, session_id: str) -> tuple[GameSession, threading.Lock]:
        with self._registry_lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise HTTPException(status_code=404, detail="unknown session")
            return session, self._locks[session_id]


def create_app(ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="bitpredict game service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore()
    app.state.store = store

    @app.post("/sessions")
    def new_session(body: CreateSessionBody):
        spec = PredictorSpec.from_dict(body.predictor) if body.predictor else None
        try:
            session = create_session(
                predictor_spec=spec,
                depth=body.depth,
                stakes=StakesConfig(
                    stake=body.stakes.stake,
                    jackpot=body.stakes.jackpot,
                    broke=body.stakes.broke,
                ),
                seed=body.seed,
                window_width=body.window_width,
                choose=body.choose,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        store.add(session)
        return session.state_dict()

    @app.post("/sessions/{session_id}/commit")
    def commit(session_id: str):
        session, lock = store.get(session_id)
        with lock:
            try:
                digest = session.commit_round()
            except ProtocolError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
        return {"hash": digest, "round": session.round_index}

    @app.post("/sessions/{session_id}/round")
    def play(session_id: str, body: RoundBody):
        session, lock = store.get(session_id)
        with lock:
            try:
                record = session.play_round(body.bit)
            except ProtocolError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
        return {"record": record.to_dict(), "status": session.status, "balance": session.balance}

    @app.get("/sessions/{session_id}")
    def state(session_id: str):
        session, lock = store.get(session_id)
        with lock:
            return session.state_dict()

    @app.get("/sessions/{session_id}/transcript", response_class=PlainTextResponse)
    def transcript(session_id: str):
        session, lock = store.get(session_id)
        with lock:
            return transcript_to_jsonl(export_transcript(session))

    @app.get("/sessions/{session_id}/report")
    def report(session_id: str):
        session, lock = store.get(session_id)
        with lock:
            return session_report(session)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
