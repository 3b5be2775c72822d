"""In-memory session registry backed by per-session log files.

Sessions live in memory while the service runs; because every session is
event-sourced to its log file, a session missing from memory (say, after a
restart) is rebuilt by replaying its file.  Events for one session are
processed strictly in order under its own lock; sessions share nothing.
"""

from __future__ import annotations

import asyncio
import random
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from ..corpus import CorpusFile
from ..engine import (
    EngineConfig,
    EngineOutput,
    GameSession,
    build_plan,
    build_practice_plan,
    custom_plan,
)
from ..logio import JsonlSessionSink, load_session_file, replay_session_state
from .schemas import CreateSessionRequest, SessionSummary


class UnknownSessionError(KeyError):
    pass


@dataclass
class ManagedSession:
    session_id: str
    game: GameSession
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)
    seq: int = 0

    def next_seq(self) -> int:
        self.seq += 1
        return self.seq

    def summary(self) -> SessionSummary:
        game = self.game
        return SessionSummary(
            session_id=self.session_id,
            subject_id=game.plan.subject_id,
            seed=game.plan.seed,
            agent=game.agent,
            plan_kind=game.plan.kind,
            complete=game.complete,
            aborted=game.aborted,
            trials_done=len(game.trial_logs),
            trials_total=len(game.plan.entries),
        )


class SessionManager:
    def __init__(self, corpus: CorpusFile, engine_config: EngineConfig, log_dir: Path):
        self.corpus = corpus
        self.engine_config = engine_config
        self.log_dir = Path(log_dir)
        self.sessions: dict[str, ManagedSession] = {}

    def log_path(self, session_id: str) -> Path:
        return self.log_dir / f"{session_id}.jsonl"

    def create(self, request: CreateSessionRequest) -> tuple[ManagedSession, list[EngineOutput]]:
        seed = request.seed if request.seed is not None else random.getrandbits(31)
        if request.sentence_ids:
            plan = custom_plan(self.corpus, request.subject_id, request.sentence_ids, seed)
        elif request.practice:
            plan = build_practice_plan(self.corpus, request.subject_id, seed)
        else:
            plan = build_plan(self.corpus, request.subject_id, seed)
        session_id = uuid.uuid4().hex[:12]
        sink = JsonlSessionSink(self.log_path(session_id))
        game = GameSession(
            self.corpus, plan, self.engine_config, agent=request.agent, sink=sink
        )
        outputs = game.start_trial(request.start_ms)
        managed = ManagedSession(session_id=session_id, game=game)
        self.sessions[session_id] = managed
        return managed, outputs

    def get(self, session_id: str) -> ManagedSession:
        """Fetch a live session, replaying its log file if it fell out of memory."""
        if session_id in self.sessions:
            return self.sessions[session_id]
        path = self.log_path(session_id)
        if not path.exists():
            raise UnknownSessionError(session_id)
        game = replay_session_state(self.corpus, load_session_file(path))
        # Reattach the append-only sink so further play keeps logging;
        # replay itself must not re-write the records it consumed.
        game.sink = JsonlSessionSink(path)
        managed = ManagedSession(session_id=session_id, game=game)
        self.sessions[session_id] = managed
        return managed

    def evict(self, session_id: str) -> None:
        """Drop a session from memory (its log file remains)."""
        self.sessions.pop(session_id, None)

    def list(self) -> list[SessionSummary]:
        return [m.summary() for m in self.sessions.values()]

    def shutdown(self) -> None:
        for managed in self.sessions.values():
            game = managed.game
            if not game.complete and not game.aborted:
                game.abort()
        self.sessions.clear()
