"""Wire message schemas for the HTTP and WebSocket interfaces.

Client-to-server messages are a discriminated union on ``type``; every
input event carries the client's monotonic timestamp, and the server
stamps each reply with a per-session sequence number.  Versioned so the
schema can evolve without breaking recorded traffic.
"""

from __future__ import annotations

from typing import Annotated, Literal, Union

from pydantic import BaseModel, Field, TypeAdapter

PROTOCOL_VERSION = 1


# -- client -> server ---------------------------------------------------------


class ClientHello(BaseModel):
    type: Literal["hello"] = "hello"
    protocol: int = PROTOCOL_VERSION


class ClientInputEvent(BaseModel):
    type: Literal["input_event"] = "input_event"
    t_ms: float
    direction: Literal["LEFT", "NEUTRAL", "RIGHT"]


class ClientJump(BaseModel):
    type: Literal["jump"] = "jump"
    t_ms: float


class ClientTick(BaseModel):
    type: Literal["tick"] = "tick"
    t_ms: float


class ClientResume(BaseModel):
    type: Literal["resume"] = "resume"


ClientMessage = Annotated[
    Union[ClientHello, ClientInputEvent, ClientJump, ClientTick, ClientResume],
    Field(discriminator="type"),
]

client_message_adapter: TypeAdapter = TypeAdapter(ClientMessage)


# -- server -> client ---------------------------------------------------------


class IconView(BaseModel):
    position: float
    direction: str
    phase: str | None


class ViewPayload(BaseModel):
    sentence_id: str | None
    phrases: list[str]
    stack: list[int]
    queue: list[int]
    arcs: list[list[int]]
    icon: IconView
    trial_order: int | None
    trials_total: int
    verdict: str | None
    session_complete: bool
    clock_ms: float | None


class ServerMessageBase(BaseModel):
    v: int = PROTOCOL_VERSION
    seq: int


class ViewMessage(ServerMessageBase):
    type: Literal["view"] = "view"
    view: ViewPayload


class ActionCommittedMessage(ServerMessageBase):
    type: Literal["action_committed"] = "action_committed"
    kind: str
    judgment: str | None
    response_ms: float | None
    committed_at: float
    auto: bool


class AnimatingMessage(ServerMessageBase):
    type: Literal["animating"] = "animating"
    start_ms: float
    until_ms: float
    after: str


class VerdictMessage(ServerMessageBase):
    type: Literal["verdict"] = "verdict"
    verdict: Literal["OK", "NG"]
    trial_order: int


class SessionDoneMessage(ServerMessageBase):
    type: Literal["session_done"] = "session_done"
    trials: int


class ErrorMessage(ServerMessageBase):
    type: Literal["error"] = "error"
    code: str
    message: str


ServerMessage = Union[
    ViewMessage,
    ActionCommittedMessage,
    AnimatingMessage,
    VerdictMessage,
    SessionDoneMessage,
    ErrorMessage,
]


# -- REST ---------------------------------------------------------------------


class PlanEntryModel(BaseModel):
    sentence_id: str
    block: str


class EngineConfigModel(BaseModel):
    icon_speed: float
    drift_speed: float
    animation_ms: float
    commit_mode: str


class CreateSessionRequest(BaseModel):
    subject_id: str
    seed: int | None = None
    practice: bool = False
    sentence_ids: list[str] | None = None
    agent: str = "human"
    start_ms: float = 0.0


class SessionSummary(BaseModel):
    session_id: str
    subject_id: str
    seed: int
    agent: str
    plan_kind: str
    complete: bool
    aborted: bool
    trials_done: int
    trials_total: int


class CreateSessionResponse(BaseModel):
    session_id: str
    subject_id: str
    seed: int
    plan: list[PlanEntryModel]
    engine: EngineConfigModel
    view: ViewPayload


class SessionStateResponse(BaseModel):
    summary: SessionSummary
    engine: EngineConfigModel
    view: ViewPayload
