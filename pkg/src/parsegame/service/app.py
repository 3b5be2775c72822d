"""HTTP + WebSocket service around the game engine.

One engine instance per session; per-session events are serialized under a
lock, logs flush per trial, and all gameplay timing arrives as client
timestamps (the server never injects its own clock into response times).
Server receipt order is implicit in the append-only log.
"""

from __future__ import annotations

import logging
import re
from contextlib import asynccontextmanager

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import FileResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import ValidationError

from .. import __version__
from ..config import ServiceConfig
from ..corpus import corpus_summary, load_corpus, validate_corpus
from ..engine import (
    ClockError,
    Direction,
    EngineOutput,
    InputEvent,
    InputKind,
    InsufficientCorpusError,
    OutputType,
    SessionCompleteError,
)
from .manager import ManagedSession, SessionManager, UnknownSessionError
from .schemas import (
    ActionCommittedMessage,
    AnimatingMessage,
    ClientHello,
    ClientInputEvent,
    ClientJump,
    ClientResume,
    ClientTick,
    CreateSessionRequest,
    CreateSessionResponse,
    EngineConfigModel,
    ErrorMessage,
    PlanEntryModel,
    SessionDoneMessage,
    SessionStateResponse,
    SessionSummary,
    VerdictMessage,
    ViewMessage,
    ViewPayload,
    client_message_adapter,
)

logger = logging.getLogger(__name__)

_LOG_NAME = re.compile(r"^[A-Za-z0-9_.-]+\.jsonl$")


class CorpusInvalidError(RuntimeError):
    """Startup corpus failed validation; the service refuses to run."""


def output_to_message(output: EngineOutput, seq: int):
    if output.type is OutputType.VIEW:
        return ViewMessage(seq=seq, view=ViewPayload(**output.data))
    if output.type is OutputType.ACTION_COMMITTED:
        return ActionCommittedMessage(seq=seq, **output.data)
    if output.type is OutputType.ANIMATING:
        return AnimatingMessage(seq=seq, **output.data)
    if output.type is OutputType.VERDICT:
        return VerdictMessage(seq=seq, **output.data)
    if output.type is OutputType.SESSION_DONE:
        return SessionDoneMessage(seq=seq, **output.data)
    raise ValueError(f"unmapped engine output {output.type}")


def create_app(config: ServiceConfig) -> FastAPI:
    """Build the service; an invalid corpus aborts startup."""
    config.ensure_paths()
    corpus = load_corpus(config.corpus_path)
    validity = validate_corpus(corpus)
    if not validity.ok:
        raise CorpusInvalidError(
            f"corpus {config.corpus_path} failed validation: "
            + "; ".join(validity.violations[:10])
        )
    manager = SessionManager(corpus, config.engine, config.log_dir)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        manager.shutdown()

    app = FastAPI(title="parsegame", version=__version__, lifespan=lifespan)
    app.state.manager = manager
    app.state.config = config

    @app.get("/healthz")
    def healthz() -> dict:
        return {"ok": True, "version": __version__}

    @app.get("/corpus")
    def get_corpus() -> dict:
        return corpus_summary(corpus)

    @app.post("/sessions", response_model=CreateSessionResponse, status_code=201)
    def create_session(request: CreateSessionRequest) -> CreateSessionResponse:
        try:
            managed, _outputs = manager.create(request)
        except InsufficientCorpusError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        game = managed.game
        return CreateSessionResponse(
            session_id=managed.session_id,
            subject_id=game.plan.subject_id,
            seed=game.plan.seed,
            plan=[
                PlanEntryModel(sentence_id=e.sentence_id, block=e.block.value)
                for e in game.plan.entries
            ],
            engine=EngineConfigModel(**game.config.to_dict()),
            view=ViewPayload(**game.view()),
        )

    @app.get("/sessions", response_model=list[SessionSummary])
    def list_sessions() -> list[SessionSummary]:
        return manager.list()

    def _managed(session_id: str) -> ManagedSession:
        try:
            return manager.get(session_id)
        except UnknownSessionError:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")

    @app.get("/sessions/{session_id}", response_model=SessionStateResponse)
    def session_state(session_id: str) -> SessionStateResponse:
        managed = _managed(session_id)
        return SessionStateResponse(
            summary=managed.summary(),
            engine=EngineConfigModel(**managed.game.config.to_dict()),
            view=ViewPayload(**managed.game.view()),
        )

    @app.get("/logs")
    def list_logs() -> list[str]:
        return sorted(p.name for p in config.log_dir.glob("*.jsonl"))

    @app.get("/logs/{name}")
    def download_log(name: str):
        if not _LOG_NAME.match(name):
            raise HTTPException(status_code=400, detail="bad log name")
        path = config.log_dir / name
        if not path.exists():
            raise HTTPException(status_code=404, detail=f"no log named {name!r}")
        return FileResponse(path, media_type="application/jsonl", filename=name)

    @app.websocket("/sessions/{session_id}/ws")
    async def session_ws(websocket: WebSocket, session_id: str) -> None:
        await websocket.accept()
        try:
            managed = manager.get(session_id)
        except UnknownSessionError:
            await websocket.send_text(
                ErrorMessage(seq=0, code="unknown_session", message=session_id)
                .model_dump_json()
            )
            await websocket.close(code=4404)
            return
        game = managed.game
        try:
            while True:
                raw = await websocket.receive_text()
                try:
                    message = client_message_adapter.validate_json(raw)
                except ValidationError as exc:
                    await websocket.send_text(
                        ErrorMessage(
                            seq=managed.next_seq(),
                            code="malformed",
                            message=str(exc.errors()[0].get("msg", "invalid message")),
                        ).model_dump_json()
                    )
                    continue
                async with managed.lock:
                    try:
                        outputs = _dispatch(game, message)
                    except ClockError as exc:
                        await websocket.send_text(
                            ErrorMessage(
                                seq=managed.next_seq(), code="clock", message=str(exc)
                            ).model_dump_json()
                        )
                        continue
                    except SessionCompleteError as exc:
                        await websocket.send_text(
                            ErrorMessage(
                                seq=managed.next_seq(), code="complete", message=str(exc)
                            ).model_dump_json()
                        )
                        continue
                    replies = [
                        output_to_message(out, managed.next_seq()) for out in outputs
                    ]
                for reply in replies:
                    await websocket.send_text(reply.model_dump_json())
        except WebSocketDisconnect:
            logger.info("session %s disconnected", session_id)

    if config.static_dir is not None:
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def _dispatch(game, message) -> list[EngineOutput]:
    if isinstance(message, (ClientHello, ClientResume)):
        at = game.clock_ms if game.clock_ms is not None else 0.0
        return [EngineOutput(OutputType.VIEW, at, game.view())]
    if isinstance(message, ClientInputEvent):
        return game.feed_input(
            InputEvent(message.t_ms, InputKind.DIRECTION, Direction(message.direction))
        )
    if isinstance(message, ClientJump):
        return game.feed_input(InputEvent(message.t_ms, InputKind.JUMP))
    if isinstance(message, ClientTick):
        return game.tick(message.t_ms)
    raise ValueError(f"unhandled message {type(message)}")
