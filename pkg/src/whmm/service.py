"""Session host for live participants: the three-phase protocol over HTTP.

The protocol walks each session forward through
``presented_problem -> presented_state_goal -> awaiting_choice -> completed``;
phases only ever advance.  Policies are shown in a per-session randomized
display order (position-bias control) while submissions use canonical labels,
and every completed session appends exactly one record to the JSON Lines log.

Endpoints (all JSON; errors carry ``{"error": {"code", "message"}}``):

    GET  /problems                     list bundled problems
    POST /sessions                     {"problem_id": ..., "cohort_id"?: ...}
    GET  /sessions/{id}                current phase + payload (idempotent)
    POST /sessions/{id}/advance        move one phase forward
    POST /sessions/{id}/choice         {"label": "A".."D"}
    GET  /cohorts/{id}/summary         summary of logged records for a cohort
"""

from __future__ import annotations

import random
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .bridge import POLICY_LABELS, Problem
from .errors import (
    DuplicateSubmission,
    InvalidLabel,
    MixedProblemIds,
    PhaseOrderViolation,
    UnknownCohort,
    UnknownProblem,
    UnknownSession,
    WhmmError,
)
from .eventlog import ChoiceLog
from .experiment import SOURCE_HUMAN, ChoiceRecord, summarize
from .serialization import fixture_dir, load_problem

PHASES = ("presented_problem", "presented_state_goal", "awaiting_choice", "completed")


def _humanize(label: str) -> str:
    return label.replace("_", " ")


class ProblemStore:
    """Problems loaded from ``*.problem.json`` files in one directory."""

    def __init__(self, directory=None):
        self.directory = Path(directory) if directory else fixture_dir()
        self._problems: dict[str, Problem] = {}
        for path in sorted(self.directory.glob("*.problem.json")):
            problem = load_problem(path)
            self._problems[problem.problem_id] = problem

    def ids(self) -> list[str]:
        return sorted(self._problems)

    def get(self, problem_id: str) -> Problem:
        try:
            return self._problems[problem_id]
        except KeyError:
            raise UnknownProblem(f"no problem named {problem_id!r}") from None


@dataclass
class Session:
    session_id: str
    problem_id: str
    cohort_id: str
    phase: str = PHASES[0]
    display_order: tuple[str, ...] = ()
    phase_entered_ms: list = field(default_factory=list)
    choice: str | None = None


class SessionService:
    """Phase machine plus persistence; safe for concurrent sessions.

    Session mutations run under one lock (sessions are tiny, contention is
    negligible at desk scale); log appends serialize through the ChoiceLog.
    """

    def __init__(self, store: ProblemStore, log: ChoiceLog):
        self.store = store
        self.log = log
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    # --- clock (overridable in tests) ---------------------------------
    def _now_ms(self) -> int:
        return time.time_ns() // 1_000_000

    def _enter_phase(self, session: Session) -> None:
        now = self._now_ms()
        if session.phase_entered_ms:
            now = max(now, session.phase_entered_ms[-1] + 1)
        session.phase_entered_ms.append(now)

    # --- operations ------------------------------------------------------
    def create_session(self, problem_id: str, cohort_id: str | None = None) -> Session:
        problem = self.store.get(problem_id)
        token = secrets.token_urlsafe(32)
        order = list(POLICY_LABELS)
        random.Random(token).shuffle(order)
        session = Session(
            session_id=token,
            problem_id=problem.problem_id,
            cohort_id=cohort_id or f"live-{problem.problem_id}",
            display_order=tuple(order),
        )
        with self._lock:
            self._enter_phase(session)
            self._sessions[token] = session
        return session

    def get_session(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no session {session_id!r}")
        return session

    def advance_phase(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise UnknownSession(f"no session {session_id!r}")
            index = PHASES.index(session.phase)
            if index >= PHASES.index("awaiting_choice"):
                raise PhaseOrderViolation(
                    f"cannot advance from phase {session.phase!r}; submit a choice instead")
            session.phase = PHASES[index + 1]
            self._enter_phase(session)
        return session

    def submit_choice(self, session_id: str, label: str) -> ChoiceRecord:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise UnknownSession(f"no session {session_id!r}")
            if session.phase == "completed":
                raise DuplicateSubmission("choice already recorded for this session")
            if session.phase != "awaiting_choice":
                raise PhaseOrderViolation(
                    f"session is in phase {session.phase!r}, not awaiting a choice")
            if label not in POLICY_LABELS:
                raise InvalidLabel(f"label must be one of {POLICY_LABELS}, got {label!r}")
            now = self._now_ms()
            awaiting_entered = session.phase_entered_ms[-1]
            now = max(now, awaiting_entered + 1)
            record = ChoiceRecord(
                problem_id=session.problem_id,
                subject_id=session.session_id,
                phase_timestamps=tuple(session.phase_entered_ms[:3]),
                chosen=label,
                latency_ms=now - awaiting_entered,
                source=SOURCE_HUMAN,
                cohort_id=session.cohort_id,
            )
            session.phase = "completed"
            session.choice = label
            session.phase_entered_ms.append(now)
        self.log.append(record)
        return record

    # --- payloads ---------------------------------------------------------
    def phase_payload(self, session: Session) -> dict:
        problem = self.store.get(session.problem_id)
        if session.phase == "presented_problem":
            return {"description": problem.description}
        if session.phase == "presented_state_goal":
            states = problem.model_true.states
            return {
                "current_state": _humanize(states.labels[problem.current]),
                "goal": [_humanize(states.labels[i]) for i in states.goal_states],
            }
        if session.phase == "awaiting_choice":
            by_label = {p.label: p for p in problem.policies}
            return {"policies": [{"key": lbl, "text": by_label[lbl].text}
                                 for lbl in session.display_order]}
        return {"status": "recorded"}

    def session_view(self, session: Session) -> dict:
        return {
            "session_id": session.session_id,
            "problem_id": session.problem_id,
            "cohort_id": session.cohort_id,
            "phase": session.phase,
            "payload": self.phase_payload(session),
        }

    def cohort_summary(self, cohort_id: str) -> dict:
        records = [r for r in self.log.read() if r.cohort_id == cohort_id]
        if not records:
            raise UnknownCohort(f"no records for cohort {cohort_id!r}")
        problem_ids = {r.problem_id for r in records}
        if len(problem_ids) > 1:
            raise MixedProblemIds(f"cohort spans problems {sorted(problem_ids)}")
        problem = self.store.get(problem_ids.pop())
        return summarize(records, problem).as_dict()


_STATUS = {
    "unknown_problem": 404,
    "unknown_session": 404,
    "unknown_cohort": 404,
    "phase_order_violation": 409,
    "duplicate_submission": 409,
    "invalid_label": 400,
    "mixed_problem_ids": 400,
}


class CreateSessionBody(BaseModel):
    problem_id: str
    cohort_id: str | None = None


class ChoiceBody(BaseModel):
    label: str


def create_app(store: ProblemStore | None = None, log_path="choices.jsonl"):
    """FastAPI application over a SessionService."""
    service = SessionService(store or ProblemStore(), ChoiceLog(log_path))
    app = FastAPI(title="whmm session service")
    app.state.service = service

    @app.exception_handler(WhmmError)
    async def on_domain_error(_request: Request, exc: WhmmError):
        status = _STATUS.get(exc.code, 400)
        return JSONResponse(status_code=status,
                            content={"error": {"code": exc.code, "message": str(exc)}})

    @app.get("/problems")
    def list_problems():
        return {"problems": [
            {"id": pid, "description": service.store.get(pid).description}
            for pid in service.store.ids()
        ]}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        session = service.create_session(body.problem_id, body.cohort_id)
        return service.session_view(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return service.session_view(service.get_session(session_id))

    @app.post("/sessions/{session_id}/advance")
    def advance(session_id: str):
        return service.session_view(service.advance_phase(session_id))

    @app.post("/sessions/{session_id}/choice")
    def choose(session_id: str, body: ChoiceBody):
        record = service.submit_choice(session_id, body.label)
        view = service.session_view(service.get_session(session_id))
        view["record"] = record.as_dict()
        return view

    @app.get("/cohorts/{cohort_id}/summary")
    def cohort_summary(cohort_id: str):
        return service.cohort_summary(cohort_id)

    return app
