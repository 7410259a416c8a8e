"""HTTP facade over the dialog engine, FAQ pipeline, and model.

Sessions live in an in-memory map with idle eviction; per-session
transitions are serialized with a lock, so concurrent requests to one
session cannot interleave. Every error response carries
`{"error": ..., "detail": ...}`.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from medclarify import faq as faq_mod
from medclarify.kb import KnowledgeBase, load_kb_file
from medclarify.nbmodel import NaiveBayesModel, load_model_file
from medclarify.session import (
    DEFAULT_MAX_QUESTIONS,
    DEFAULT_TAU,
    DialogEngine,
    SessionState,
    SessionStatusError,
    SystemAction,
    normalize_answer,
)

DEFAULT_SESSION_TTL_SECONDS = 30 * 60.0


@dataclass
class ServiceConfig:
    bind: str = "127.0.0.1:8000"
    model_path: Optional[str] = None
    kb_path: Optional[str] = None
    faq_path: Optional[str] = None
    tau: float = DEFAULT_TAU
    max_turns: int = DEFAULT_MAX_QUESTIONS
    theta: float = faq_mod.DEFAULT_THETA
    session_ttl_seconds: float = DEFAULT_SESSION_TTL_SECONDS

    def __post_init__(self):
        if not 0 < self.tau <= 1:
            raise ValueError(f"tau must be in (0, 1], got {self.tau}")
        if self.max_turns < 1:
            raise ValueError(f"max-turns must be >= 1, got {self.max_turns}")
        if not 0 <= self.theta <= 1:
            raise ValueError(f"theta must be in [0, 1], got {self.theta}")


@dataclass
class _SessionEntry:
    state: SessionState
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_access: float = field(default_factory=time.monotonic)


class _SessionStore:
    def __init__(self, ttl_seconds: float):
        self._ttl = ttl_seconds
        self._entries: dict[str, _SessionEntry] = {}
        self._lock = threading.Lock()

    def _sweep(self, now: float) -> None:
        stale = [sid for sid, e in self._entries.items() if now - e.last_access > self._ttl]
        for sid in stale:
            del self._entries[sid]

    def put(self, state: SessionState) -> None:
        with self._lock:
            self._sweep(time.monotonic())
            self._entries[state.session_id] = _SessionEntry(state=state)

    def get(self, session_id: str) -> Optional[_SessionEntry]:
        with self._lock:
            now = time.monotonic()
            self._sweep(now)
            entry = self._entries.get(session_id)
            if entry is not None:
                entry.last_access = now
            return entry


class MessageBody(BaseModel):
    text: str


class AnswerBody(BaseModel):
    answer: str


class FaqBody(BaseModel):
    question: str


def _action_payload(action: SystemAction) -> dict:
    if action.kind == "ask":
        return {
            "kind": "ask",
            "symptom": action.question_symptom,
            "question": action.question_text,
        }
    return {
        "kind": "diagnose",
        "ranking": [
            {"disease": d, "probability": p} for d, p in action.diagnosis_ranking
        ],
    }


def _outcome_payload(outcome: faq_mod.FaqOutcome) -> dict:
    return {
        "kind": outcome.kind,
        "clarification": outcome.clarification,
        "answer": outcome.answer,
        "matched_entry": outcome.matched_entry,
        "score": outcome.score,
    }


def _error(status_code: int, error: str, detail: str) -> HTTPException:
    return HTTPException(status_code=status_code, detail={"error": error, "detail": detail})


def create_app(
    config: ServiceConfig,
    model: Optional[NaiveBayesModel] = None,
    kb: Optional[KnowledgeBase] = None,
    faq_index: Optional[faq_mod.FaqIndex] = None,
) -> FastAPI:
    """Build the service; model/kb/faq may be passed directly or via paths."""
    if model is None and config.model_path:
        model = load_model_file(config.model_path)
    if kb is None and config.kb_path:
        kb = load_kb_file(config.kb_path)
    if faq_index is None and config.faq_path:
        with open(config.faq_path, "rb") as fh:
            faq_index = faq_mod.build_index(faq_mod.load_faq_entries(fh))

    engine: Optional[DialogEngine] = None
    if model is not None and kb is not None:
        engine = DialogEngine(
            model, kb, tau=config.tau, max_questions=config.max_turns
        )

    app = FastAPI(title="medclarify", docs_url=None, redoc_url=None)
    # the web chat client is served from a different origin than the API
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.engine = engine
    app.state.faq_index = faq_index
    app.state.config = config
    store = _SessionStore(config.session_ttl_seconds)
    app.state.sessions = store

    @app.exception_handler(HTTPException)
    async def _http_exception_handler(request: Request, exc: HTTPException):
        detail = exc.detail
        if not isinstance(detail, dict) or "error" not in detail:
            detail = {"error": "http_error", "detail": str(detail)}
        return JSONResponse(status_code=exc.status_code, content=detail)

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": "validation_error", "detail": str(exc.errors())},
        )

    def _require_engine() -> DialogEngine:
        if app.state.engine is None:
            raise _error(503, "model_not_loaded", "no diagnosis model is loaded")
        return app.state.engine

    def _require_session(session_id: str) -> _SessionEntry:
        entry = store.get(session_id)
        if entry is None:
            raise _error(404, "unknown_session", f"no session {session_id!r}")
        return entry

    @app.post("/api/sessions", status_code=201)
    def create_session():
        engine = _require_engine()
        state = engine.start_session()
        store.put(state)
        return {"session_id": state.session_id}

    @app.post("/api/sessions/{session_id}/message")
    def post_message(session_id: str, body: MessageBody):
        engine = _require_engine()
        entry = _require_session(session_id)
        with entry.lock:
            try:
                new_state, action = engine.user_message(entry.state, body.text)
            except SessionStatusError as exc:
                raise _error(409, "wrong_status", str(exc))
            entry.state = new_state
        return _action_payload(action)

    @app.post("/api/sessions/{session_id}/answer")
    def post_answer(session_id: str, body: AnswerBody):
        engine = _require_engine()
        entry = _require_session(session_id)
        answer = normalize_answer(body.answer)
        if answer is None:
            raise _error(
                422,
                "unrecognized_answer",
                f"could not understand {body.answer!r}; please answer yes or no",
            )
        with entry.lock:
            try:
                new_state, action = engine.answer_clarification(entry.state, answer)
            except SessionStatusError as exc:
                raise _error(409, "wrong_status", str(exc))
            entry.state = new_state
        return _action_payload(action)

    @app.post("/api/faq")
    def post_faq(body: FaqBody):
        if app.state.faq_index is None:
            raise _error(503, "faq_not_loaded", "no FAQ index is configured")
        outcome = faq_mod.faq_pipeline(
            app.state.faq_index, body.question, theta=config.theta
        )
        return _outcome_payload(outcome)

    @app.get("/healthz")
    def healthz():
        return {
            "status": "ok",
            "model_loaded": app.state.engine is not None,
            "faq_loaded": app.state.faq_index is not None,
        }

    return app
