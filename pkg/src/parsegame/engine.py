"""Game session engine: the trial state machine and the 40-sentence plan.

One session walks a player (or bot) through a planned list of sentences.
Within a trial the icon sits between a SHIFT wall (left, -1) and a REDUCE
wall (right, +1); holding a direction slides it at a configurable speed and
touching a wall commits that judgment.  Every action is followed by a
fixed-length animation window during which input is recorded but inert,
and forced actions resolve by themselves behind their windows.

The engine owns no clock.  All time comes from the caller as millisecond
timestamps on input events and ticks, and all motion is integrated
analytically between those timestamps: a commit lands at the exact instant
the icon would reach the wall, however coarsely the caller ticks.  This
makes a session a pure function of its input-event stream, which is what
the event log, replay, and the response-time bookkeeping rely on.

Response time for a judged action runs from entry into the judgment phase
(the moment the previous animation ended) to the commit instant.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from enum import Enum
from typing import Protocol, Sequence

from .corpus import CorpusFile, SentenceRecord, SentenceType
from .transition import (
    ActionKind,
    Judgment,
    ParserState,
    apply_automatic,
    apply_judgment,
    init_state,
    is_correct,
    pending_action,
)

logger = logging.getLogger(__name__)

ANIMATION_MS_MIN = 820.0
ANIMATION_MS_MAX = 860.0


class ClockError(ValueError):
    """An input event arrived with a timestamp behind the session clock."""


class TrialActiveError(RuntimeError):
    """A trial was started while the previous one is still in play."""


class SessionCompleteError(RuntimeError):
    """No trials remain in the plan."""


class InsufficientCorpusError(ValueError):
    """The corpus cannot fill the plan; names the deficient category."""


class Phase(str, Enum):
    AWAIT_JUDGMENT = "AWAIT_JUDGMENT"
    ANIMATING = "ANIMATING"
    AUTO_ACTION = "AUTO_ACTION"
    TRIAL_DONE = "TRIAL_DONE"


class Direction(str, Enum):
    LEFT = "LEFT"
    NEUTRAL = "NEUTRAL"
    RIGHT = "RIGHT"

    @property
    def sign(self) -> int:
        return {"LEFT": -1, "NEUTRAL": 0, "RIGHT": 1}[self.value]


class InputKind(str, Enum):
    DIRECTION = "direction"
    JUMP = "jump"


@dataclass(frozen=True)
class InputEvent:
    timestamp_ms: float
    kind: InputKind
    direction: Direction | None = None

    def __post_init__(self) -> None:
        if self.kind is InputKind.DIRECTION and self.direction is None:
            raise ValueError("direction events carry a direction")


class CommitMode(str, Enum):
    HOLD = "hold"  # hold a direction until the icon reaches the wall
    INSTANT = "instant"  # a single press commits immediately


@dataclass(frozen=True)
class EngineConfig:
    """Icon kinematics and animation timing.

    ``icon_speed`` and ``drift_speed`` are in full ranges per second (the
    wall is one unit from center).  Animation durations outside the allowed
    820-860 ms band are clamped, not rejected.
    """

    icon_speed: float = 2.0
    drift_speed: float = 1.0
    animation_ms: float = 840.0
    commit_mode: CommitMode = CommitMode.HOLD

    def __post_init__(self) -> None:
        if self.icon_speed <= 0:
            raise ValueError(f"icon_speed must be positive, got {self.icon_speed}")
        if self.drift_speed < 0:
            raise ValueError(f"drift_speed must be >= 0, got {self.drift_speed}")
        clamped = min(max(self.animation_ms, ANIMATION_MS_MIN), ANIMATION_MS_MAX)
        if clamped != self.animation_ms:
            logger.warning(
                "animation_ms %.0f outside [%.0f, %.0f]; clamped to %.0f",
                self.animation_ms,
                ANIMATION_MS_MIN,
                ANIMATION_MS_MAX,
                clamped,
            )
            object.__setattr__(self, "animation_ms", clamped)

    def to_dict(self) -> dict:
        return {
            "icon_speed": self.icon_speed,
            "drift_speed": self.drift_speed,
            "animation_ms": self.animation_ms,
            "commit_mode": self.commit_mode.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EngineConfig":
        return cls(
            icon_speed=data.get("icon_speed", 2.0),
            drift_speed=data.get("drift_speed", 1.0),
            animation_ms=data.get("animation_ms", 840.0),
            commit_mode=CommitMode(data.get("commit_mode", "hold")),
        )


class Block(str, Enum):
    BLOCK1 = "BLOCK1"
    BLOCK2 = "BLOCK2"
    BLOCK3 = "BLOCK3"
    PRACTICE = "PRACTICE"
    CUSTOM = "CUSTOM"


@dataclass(frozen=True)
class PlanEntry:
    sentence_id: str
    block: Block


@dataclass(frozen=True)
class PlanSpec:
    """Block sizes for a main session plan."""

    block1_fillers: int = 5
    block2_fillers: int = 15
    gp_per_type: int = 5
    block3_fillers: int = 5

    @property
    def filler_count(self) -> int:
        return self.block1_fillers + self.block2_fillers + self.block3_fillers

    @property
    def total(self) -> int:
        return self.filler_count + 3 * self.gp_per_type


@dataclass(frozen=True)
class SessionPlan:
    subject_id: str
    seed: int
    entries: tuple[PlanEntry, ...]
    kind: str = "main"  # "main" | "practice" | "custom"

    @property
    def practice(self) -> bool:
        return self.kind == "practice"

    def sentence_ids(self) -> tuple[str, ...]:
        return tuple(e.sentence_id for e in self.entries)


def build_plan(
    corpus: CorpusFile,
    subject_id: str,
    seed: int,
    spec: PlanSpec = PlanSpec(),
) -> SessionPlan:
    """Deterministic main-session plan for one subject.

    Block 1 and 3 are fillers framing a shuffled middle block of fillers
    plus the three garden-path variants.  Both the filler-to-block
    assignment and the middle shuffle come from the one seeded generator,
    so identical seeds give identical plans.  No sentence repeats.
    """
    rng = random.Random(seed)
    fillers = [r.id for r in corpus.fillers]
    if len(fillers) < spec.filler_count:
        raise InsufficientCorpusError(
            f"need {spec.filler_count} FILLER sentences, corpus has {len(fillers)}"
        )
    chosen_fillers = rng.sample(fillers, spec.filler_count)
    block1 = chosen_fillers[: spec.block1_fillers]
    block2_fillers = chosen_fillers[spec.block1_fillers : spec.block1_fillers + spec.block2_fillers]
    block3 = chosen_fillers[spec.block1_fillers + spec.block2_fillers :]

    block2 = list(block2_fillers)
    for stype in (SentenceType.CTRL, SentenceType.EB, SentenceType.LB):
        ids = [r.id for r in corpus.of_type(stype)]
        if len(ids) < spec.gp_per_type:
            raise InsufficientCorpusError(
                f"need {spec.gp_per_type} {stype.value} sentences, corpus has {len(ids)}"
            )
        block2.extend(rng.sample(ids, spec.gp_per_type))
    rng.shuffle(block2)

    entries = (
        tuple(PlanEntry(s, Block.BLOCK1) for s in block1)
        + tuple(PlanEntry(s, Block.BLOCK2) for s in block2)
        + tuple(PlanEntry(s, Block.BLOCK3) for s in block3)
    )
    return SessionPlan(subject_id, seed, entries, kind="main")


def build_practice_plan(
    corpus: CorpusFile,
    subject_id: str,
    seed: int,
    count: int = 10,
) -> SessionPlan:
    """A short filler-only warm-up plan, excluded from analysis by default."""
    rng = random.Random(seed)
    fillers = [r.id for r in corpus.fillers]
    if len(fillers) < count:
        raise InsufficientCorpusError(
            f"need {count} FILLER sentences for practice, corpus has {len(fillers)}"
        )
    ids = rng.sample(fillers, count)
    return SessionPlan(
        subject_id, seed, tuple(PlanEntry(s, Block.PRACTICE) for s in ids), kind="practice"
    )


def custom_plan(
    corpus: CorpusFile, subject_id: str, sentence_ids: Sequence[str], seed: int = 0
) -> SessionPlan:
    """An explicit sentence list, for scripted clients and debugging."""
    for sid in sentence_ids:
        if corpus.get(sid) is None:
            raise InsufficientCorpusError(f"sentence {sid!r} not in corpus")
    return SessionPlan(
        subject_id,
        seed,
        tuple(PlanEntry(s, Block.CUSTOM) for s in sentence_ids),
        kind="custom",
    )


@dataclass(frozen=True)
class TrialAction:
    """One executed action with its timing, as logged."""

    kind: ActionKind
    stack_top_before: int | None
    queue_front_before: int
    judgment: Judgment | None
    response_ms: float | None
    committed_at: float

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "stack_top_before": self.stack_top_before,
            "queue_front_before": self.queue_front_before,
            "judgment": self.judgment.value if self.judgment else None,
            "response_ms": self.response_ms,
            "committed_at": self.committed_at,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TrialAction":
        return cls(
            kind=ActionKind(data["kind"]),
            stack_top_before=data["stack_top_before"],
            queue_front_before=data["queue_front_before"],
            judgment=Judgment(data["judgment"]) if data["judgment"] else None,
            response_ms=data["response_ms"],
            committed_at=data["committed_at"],
        )


@dataclass(frozen=True)
class TrialLog:
    """Complete record of one played trial.

    Sentence metadata (category, phrase/mora/character totals) is embedded
    so analysis never needs a corpus lookup for the basic covariates.
    """

    sentence_id: str
    order: int
    category: str
    phrases: int
    morae: int
    chars: int
    actions: tuple[TrialAction, ...]
    direction_alternations: int
    verdict: str  # "OK" | "NG"
    arcs: tuple[tuple[int, int], ...]
    started_ms: float
    done_ms: float

    def to_dict(self) -> dict:
        return {
            "sentence_id": self.sentence_id,
            "order": self.order,
            "category": self.category,
            "phrases": self.phrases,
            "morae": self.morae,
            "chars": self.chars,
            "actions": [a.to_dict() for a in self.actions],
            "alternations": self.direction_alternations,
            "verdict": self.verdict,
            "arcs": [list(a) for a in self.arcs],
            "started_ms": self.started_ms,
            "done_ms": self.done_ms,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TrialLog":
        return cls(
            sentence_id=data["sentence_id"],
            order=data["order"],
            category=data["category"],
            phrases=data["phrases"],
            morae=data["morae"],
            chars=data["chars"],
            actions=tuple(TrialAction.from_dict(a) for a in data["actions"]),
            direction_alternations=data["alternations"],
            verdict=data["verdict"],
            arcs=tuple((a[0], a[1]) for a in data["arcs"]),
            started_ms=data["started_ms"],
            done_ms=data["done_ms"],
        )


@dataclass(frozen=True)
class SessionLog:
    """Header data plus the ordered trial logs of one session."""

    subject_id: str
    seed: int
    agent: str
    plan_kind: str
    plan: tuple[PlanEntry, ...]
    config: dict
    trials: tuple[TrialLog, ...]
    complete: bool
    aborted: bool
    final_ms: float | None

    @property
    def practice(self) -> bool:
        return self.plan_kind == "practice"


class SessionSink(Protocol):
    """Receives session records as they happen (see ``logio``)."""

    def on_header(self, session: "GameSession") -> None: ...

    def on_start(self, now_ms: float) -> None: ...

    def on_event(self, event: InputEvent) -> None: ...

    def on_trial(self, trial: TrialLog) -> None: ...

    def on_end(self, complete: bool, aborted: bool, final_ms: float | None) -> None: ...


class OutputType(str, Enum):
    VIEW = "view"
    ACTION_COMMITTED = "action_committed"
    ANIMATING = "animating"
    VERDICT = "verdict"
    SESSION_DONE = "session_done"


@dataclass(frozen=True)
class EngineOutput:
    type: OutputType
    at_ms: float
    data: dict


class _TrialRuntime:
    """Mutable per-trial state; owned by exactly one session."""

    def __init__(self, record: SentenceRecord, order: int, start_ms: float):
        self.record = record
        self.order = order
        self.started_ms = start_ms
        self.state: ParserState = init_state(record.sentence)
        self.phase = Phase.ANIMATING
        self.icon_pos = 0.0
        self.anim_end_ms: float = start_ms
        self.recenter_from: tuple[float, float] | None = None
        self.await_entered_ms: float | None = None
        self.actions: list[TrialAction] = []
        self.alternations = 0
        self.last_nonneutral: Direction | None = None
        self.verdict: str | None = None
        self.done_ms: float | None = None


class GameSession:
    """One play-through of a plan, driven by timestamped events and ticks.

    All state transitions happen inside :meth:`feed_input` and :meth:`tick`;
    a session must be driven from a single thread (or otherwise serialized).
    """

    def __init__(
        self,
        corpus: CorpusFile,
        plan: SessionPlan,
        config: EngineConfig | None = None,
        agent: str = "human",
        sink: SessionSink | None = None,
    ):
        missing = [e.sentence_id for e in plan.entries if corpus.get(e.sentence_id) is None]
        if missing:
            raise InsufficientCorpusError(f"plan references unknown sentences: {missing}")
        self.corpus = corpus
        self.plan = plan
        self.config = config or EngineConfig()
        self.agent = agent
        self.sink = sink
        self.clock_ms: float | None = None
        self.direction_held = Direction.NEUTRAL
        self.events: list[InputEvent] = []
        self.trial_logs: list[TrialLog] = []
        self.trial: _TrialRuntime | None = None
        self._cursor = 0
        self.complete = False
        self.aborted = False
        if self.sink:
            self.sink.on_header(self)

    # -- public driving interface ------------------------------------------

    @property
    def phase(self) -> Phase | None:
        return self.trial.phase if self.trial else None

    @property
    def next_boundary_ms(self) -> float | None:
        """When the current animation chain ends, for headless drivers."""
        if self.trial and self.trial.phase is Phase.ANIMATING:
            return self.trial.anim_end_ms
        return None

    def start_trial(self, now_ms: float) -> list[EngineOutput]:
        """Begin the next planned trial; the leading forced actions resolve
        immediately, each behind its own animation window."""
        if self.complete or self._cursor >= len(self.plan.entries):
            raise SessionCompleteError("no trials remain in the plan")
        if self.trial is not None and self.trial.phase is not Phase.TRIAL_DONE:
            raise TrialActiveError(
                f"trial {self.trial.order} still active in phase {self.trial.phase.value}"
            )
        if self.clock_ms is not None and now_ms < self.clock_ms:
            raise ClockError(f"start at {now_ms} behind session clock {self.clock_ms}")
        if self.sink:
            self.sink.on_start(now_ms)
        outputs: list[EngineOutput] = []
        self._begin_trial(now_ms, outputs)
        return outputs

    def feed_input(self, event: InputEvent) -> list[EngineOutput]:
        """Record an event, advance time to it, then apply its payload.

        Direction changes always update the held direction and the
        alternation counter; they move the icon only while a judgment is
        awaited (or commit at once in instant mode).  A jump advances past
        a finished trial and is ignored, though logged, anywhere else.
        """
        if self.events and event.timestamp_ms < self.events[-1].timestamp_ms:
            raise ClockError(
                f"event at {event.timestamp_ms} behind previous event "
                f"{self.events[-1].timestamp_ms}"
            )
        if self.clock_ms is not None and event.timestamp_ms < self.clock_ms:
            raise ClockError(
                f"event at {event.timestamp_ms} behind session clock {self.clock_ms}"
            )
        self.events.append(event)
        if self.sink:
            self.sink.on_event(event)
        outputs: list[EngineOutput] = []
        self._advance(event.timestamp_ms, outputs)

        if event.kind is InputKind.DIRECTION:
            assert event.direction is not None
            self._note_direction(event.direction)
            self.direction_held = event.direction
            rt = self.trial
            if (
                self.config.commit_mode is CommitMode.INSTANT
                and rt is not None
                and rt.phase is Phase.AWAIT_JUDGMENT
                and event.direction is not Direction.NEUTRAL
            ):
                rt.icon_pos = float(event.direction.sign)
                judgment = Judgment.REDUCE if event.direction.sign > 0 else Judgment.SHIFT
                self._commit_judgment(rt, event.timestamp_ms, judgment, outputs)
        else:  # JUMP
            rt = self.trial
            if rt is not None and rt.phase is Phase.TRIAL_DONE and not self.complete:
                self._advance_to_next_trial(event.timestamp_ms, outputs)
        return outputs

    def tick(self, now_ms: float) -> list[EngineOutput]:
        """Advance the session to ``now_ms``.  Stale ticks are no-ops."""
        outputs: list[EngineOutput] = []
        if self.clock_ms is None or now_ms <= self.clock_ms:
            return outputs
        self._advance(now_ms, outputs)
        return outputs

    def finish_trial(self) -> TrialLog:
        """The log of the trial currently showing its verdict."""
        if self.trial is None or self.trial.phase is not Phase.TRIAL_DONE:
            raise TrialActiveError("no finished trial to collect")
        return self.trial_logs[-1]

    def abort(self, now_ms: float | None = None) -> None:
        """Close an unfinished session, flagging it aborted in the log."""
        if self.complete or self.aborted:
            return
        if now_ms is not None:
            self._advance(max(now_ms, self.clock_ms or now_ms), [])
        self.aborted = True
        if self.sink:
            self.sink.on_end(complete=False, aborted=True, final_ms=self.clock_ms)

    def view(self) -> dict:
        """Render snapshot: everything a client needs, nothing it must not see.

        In particular a finished trial exposes only the OK/NG verdict, never
        which arcs disagreed with the reference tree.
        """
        rt = self.trial
        if rt is None:
            return {
                "sentence_id": None,
                "phrases": [],
                "stack": [],
                "queue": [],
                "arcs": [],
                "icon": {"position": 0.0, "direction": self.direction_held.value, "phase": None},
                "trial_order": None,
                "trials_total": len(self.plan.entries),
                "verdict": None,
                "session_complete": self.complete,
                "clock_ms": self.clock_ms,
            }
        return {
            "sentence_id": rt.record.id,
            "phrases": [p.surface for p in rt.record.sentence.phrases],
            "stack": list(rt.state.stack),
            "queue": list(rt.state.queue),
            "arcs": sorted([a.dependent, a.head] for a in rt.state.arcs),
            "icon": {
                "position": self._display_position(rt),
                "direction": self.direction_held.value,
                "phase": rt.phase.value,
            },
            "trial_order": rt.order,
            "trials_total": len(self.plan.entries),
            "verdict": rt.verdict,
            "session_complete": self.complete,
            "clock_ms": self.clock_ms,
        }

    def to_session_log(self) -> SessionLog:
        return SessionLog(
            subject_id=self.plan.subject_id,
            seed=self.plan.seed,
            agent=self.agent,
            plan_kind=self.plan.kind,
            plan=self.plan.entries,
            config=self.config.to_dict(),
            trials=tuple(self.trial_logs),
            complete=self.complete,
            aborted=self.aborted,
            final_ms=self.clock_ms,
        )

    # -- internals -----------------------------------------------------------

    def _display_position(self, rt: _TrialRuntime) -> float:
        """Icon position for rendering; recentering is animated linearly."""
        if rt.phase is Phase.AWAIT_JUDGMENT or self.clock_ms is None:
            return rt.icon_pos
        if rt.recenter_from is not None:
            t0, pos0 = rt.recenter_from
            frac = (self.clock_ms - t0) / self.config.animation_ms
            if frac < 1.0:
                return pos0 * (1.0 - max(frac, 0.0))
        return 0.0

    def _note_direction(self, direction: Direction) -> None:
        rt = self.trial
        if rt is None or rt.verdict is not None:
            return
        if direction is Direction.NEUTRAL:
            return
        if rt.last_nonneutral is not None and rt.last_nonneutral is not direction:
            rt.alternations += 1
        rt.last_nonneutral = direction

    def _begin_trial(self, now_ms: float, outputs: list[EngineOutput]) -> None:
        entry = self.plan.entries[self._cursor]
        record = self.corpus.get(entry.sentence_id)
        assert record is not None
        self._cursor += 1
        rt = _TrialRuntime(record, self._cursor, now_ms)
        self.trial = rt
        self.clock_ms = now_ms if self.clock_ms is None else max(self.clock_ms, now_ms)
        outputs.append(EngineOutput(OutputType.VIEW, now_ms, self.view()))
        # The opening position always forces a default shift (stack empty,
        # N >= 2 phrases queued).
        self._execute_pending(rt, now_ms, outputs)
        self._settle_chain(rt, now_ms + self.config.animation_ms, outputs)

    def _advance_to_next_trial(self, now_ms: float, outputs: list[EngineOutput]) -> None:
        if self._cursor >= len(self.plan.entries):
            self.complete = True
            outputs.append(
                EngineOutput(
                    OutputType.SESSION_DONE, now_ms, {"trials": len(self.trial_logs)}
                )
            )
            if self.sink:
                self.sink.on_end(complete=True, aborted=False, final_ms=self.clock_ms)
            return
        self._begin_trial(now_ms, outputs)

    def _execute_pending(
        self,
        rt: _TrialRuntime,
        t: float,
        outputs: list[EngineOutput],
        judgment: Judgment | None = None,
        response_ms: float | None = None,
    ) -> None:
        """Apply the pending action at time ``t``, log it, emit its window."""
        if judgment is not None:
            rt.state = apply_judgment(rt.state, judgment)
        else:
            rt.phase = Phase.AUTO_ACTION
            rt.state = apply_automatic(rt.state)
        record = rt.state.trace[-1]
        action = TrialAction(
            kind=record.kind,
            stack_top_before=record.stack_top_before,
            queue_front_before=record.queue_front_before,
            judgment=judgment,
            response_ms=response_ms,
            committed_at=t,
        )
        rt.actions.append(action)
        outputs.append(
            EngineOutput(
                OutputType.ACTION_COMMITTED,
                t,
                {
                    "kind": record.kind.value,
                    "judgment": judgment.value if judgment else None,
                    "response_ms": response_ms,
                    "committed_at": t,
                    "auto": judgment is None,
                },
            )
        )
        outputs.append(
            EngineOutput(
                OutputType.ANIMATING,
                t,
                {
                    "start_ms": t,
                    "until_ms": t + self.config.animation_ms,
                    "after": record.kind.value,
                },
            )
        )
        rt.phase = Phase.ANIMATING

    def _settle_chain(
        self, rt: _TrialRuntime, window_end: float, outputs: list[EngineOutput]
    ) -> None:
        """Resolve every forced action queued behind the window ending at
        ``window_end``; leave the trial animating toward a judgment, or
        finished with its verdict already decided."""
        anim = self.config.animation_ms
        while True:
            pend = pending_action(rt.state)
            if pend.is_automatic:
                self._execute_pending(rt, window_end, outputs)
                window_end += anim
                continue
            if pend.is_judged:
                rt.phase = Phase.ANIMATING
                rt.anim_end_ms = window_end
                return
            self._finish_trial(rt, window_end, outputs)
            return

    def _finish_trial(self, rt: _TrialRuntime, done_ms: float, outputs: list[EngineOutput]) -> None:
        rt.phase = Phase.TRIAL_DONE
        rt.done_ms = done_ms
        rt.verdict = "OK" if is_correct(rt.state.arcs, rt.record.gold) else "NG"
        sentence = rt.record.sentence
        log = TrialLog(
            sentence_id=rt.record.id,
            order=rt.order,
            category=sentence.type_tag,
            phrases=sentence.n,
            morae=sentence.total_morae,
            chars=sentence.total_chars,
            actions=tuple(rt.actions),
            direction_alternations=rt.alternations,
            verdict=rt.verdict,
            arcs=tuple(sorted((a.dependent, a.head) for a in rt.state.arcs)),
            started_ms=rt.started_ms,
            done_ms=done_ms,
        )
        self.trial_logs.append(log)
        if self.sink:
            self.sink.on_trial(log)
        outputs.append(
            EngineOutput(
                OutputType.VERDICT, done_ms, {"verdict": rt.verdict, "trial_order": rt.order}
            )
        )
        outputs.append(EngineOutput(OutputType.VIEW, done_ms, self.view()))

    def _commit_judgment(
        self, rt: _TrialRuntime, t: float, judgment: Judgment, outputs: list[EngineOutput]
    ) -> None:
        assert rt.await_entered_ms is not None
        response = t - rt.await_entered_ms
        pos_at_commit = rt.icon_pos
        self._execute_pending(rt, t, outputs, judgment=judgment, response_ms=response)
        rt.recenter_from = (t, pos_at_commit)
        rt.await_entered_ms = None
        self._settle_chain(rt, t + self.config.animation_ms, outputs)

    def _advance(self, to_ms: float, outputs: list[EngineOutput]) -> None:
        if self.clock_ms is None:
            self.clock_ms = to_ms
            return
        t = self.clock_ms
        if to_ms <= t:
            return
        rt = self.trial
        while rt is not None and t < to_ms:
            if rt.phase is Phase.ANIMATING:
                if rt.anim_end_ms <= to_ms:
                    t = rt.anim_end_ms
                    rt.phase = Phase.AWAIT_JUDGMENT
                    rt.await_entered_ms = t
                    rt.icon_pos = 0.0
                    rt.recenter_from = None
                    self.clock_ms = t
                    outputs.append(EngineOutput(OutputType.VIEW, t, self.view()))
                else:
                    t = to_ms
            elif rt.phase is Phase.AWAIT_JUDGMENT:
                t = self._advance_awaiting(rt, t, to_ms, outputs)
            else:  # TRIAL_DONE (or momentary AUTO_ACTION, never persisted)
                t = to_ms
        self.clock_ms = max(self.clock_ms, to_ms)

    def _advance_awaiting(
        self, rt: _TrialRuntime, t: float, to_ms: float, outputs: list[EngineOutput]
    ) -> float:
        d = self.direction_held.sign
        if self.config.commit_mode is CommitMode.INSTANT or d == 0:
            if rt.icon_pos != 0.0 and self.config.drift_speed > 0:
                step = self.config.drift_speed / 1000.0 * (to_ms - t)
                if rt.icon_pos > 0:
                    rt.icon_pos = max(0.0, rt.icon_pos - step)
                else:
                    rt.icon_pos = min(0.0, rt.icon_pos + step)
            return to_ms
        v = self.config.icon_speed / 1000.0
        target = 1.0 if d > 0 else -1.0
        distance = (target - rt.icon_pos) * d
        t_cross = t + distance / v
        if t_cross > to_ms:
            rt.icon_pos = max(-1.0, min(1.0, rt.icon_pos + v * d * (to_ms - t)))
            return to_ms
        rt.icon_pos = target
        self.clock_ms = t_cross
        judgment = Judgment.REDUCE if d > 0 else Judgment.SHIFT
        self._commit_judgment(rt, t_cross, judgment, outputs)
        return t_cross
