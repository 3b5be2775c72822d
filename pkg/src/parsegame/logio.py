"""Append-only session logs: one JSON record per line, replayable.

A log file carries, in write order: a ``header`` record (subject, seed,
agent, plan, engine config), a ``start`` record per explicitly started
trial, one ``event`` record per input, one ``trial`` record per finished
trial, and a closing ``end`` record flagging completion or abort.

Serialization is canonical (sorted keys, compact separators), so loading a
file and re-serializing its records reproduces it byte for byte, and a
session replayed from its recorded inputs serializes to the same bytes as
the original.  Trial records are derived data: replay ignores them and
regenerates them from the engine.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable

from .corpus import CorpusFile
from .engine import (
    Block,
    Direction,
    EngineConfig,
    GameSession,
    InputEvent,
    InputKind,
    PlanEntry,
    SessionLog,
    SessionPlan,
    TrialLog,
)

SCHEMA_VERSION = 1


class LogFormatError(ValueError):
    """A session log file is malformed; carries file/line context."""

    def __init__(self, path: str, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


def canonical_line(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def event_to_record(event: InputEvent) -> dict:
    return {
        "rec": "event",
        "t": event.timestamp_ms,
        "kind": event.kind.value,
        "direction": event.direction.value if event.direction else None,
    }


def event_from_record(record: dict) -> InputEvent:
    direction = record.get("direction")
    return InputEvent(
        timestamp_ms=record["t"],
        kind=InputKind(record["kind"]),
        direction=Direction(direction) if direction else None,
    )


def header_record(session: GameSession) -> dict:
    plan = session.plan
    return {
        "rec": "header",
        "schema": SCHEMA_VERSION,
        "subject_id": plan.subject_id,
        "seed": plan.seed,
        "agent": session.agent,
        "plan_kind": plan.kind,
        "plan": [{"sentence_id": e.sentence_id, "block": e.block.value} for e in plan.entries],
        "config": session.config.to_dict(),
    }


def plan_from_header(header: dict) -> SessionPlan:
    entries = tuple(
        PlanEntry(e["sentence_id"], Block(e["block"])) for e in header["plan"]
    )
    return SessionPlan(
        subject_id=header["subject_id"],
        seed=header["seed"],
        entries=entries,
        kind=header["plan_kind"],
    )


class JsonlSessionSink:
    """Writes session records to an append-only UTF-8 file.

    The stream is flushed when a trial completes and on close, so a crash
    loses at most the trailing in-progress trial.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._fp: IO[str] = self.path.open("a", encoding="utf-8")
        self._closed = False

    def _write(self, record: dict, flush: bool = False) -> None:
        if self._closed:
            return
        self._fp.write(canonical_line(record) + "\n")
        if flush:
            self._fp.flush()

    def on_header(self, session: GameSession) -> None:
        self._write(header_record(session), flush=True)

    def on_start(self, now_ms: float) -> None:
        self._write({"rec": "start", "t": now_ms})

    def on_event(self, event: InputEvent) -> None:
        self._write(event_to_record(event))

    def on_trial(self, trial: TrialLog) -> None:
        record = {"rec": "trial"}
        record.update(trial.to_dict())
        self._write(record, flush=True)

    def on_end(self, complete: bool, aborted: bool, final_ms: float | None) -> None:
        self._write(
            {"rec": "end", "complete": complete, "aborted": aborted, "final_ms": final_ms},
            flush=True,
        )
        self.close()

    def close(self) -> None:
        if not self._closed:
            self._fp.close()
            self._closed = True


@dataclass
class SessionFile:
    """A parsed log file, keeping raw records for byte-exact re-serialization."""

    path: str
    records: list[dict]
    header: dict
    events: list[InputEvent]
    starts: list[float]
    trials: list[TrialLog]
    end: dict | None

    def to_session_log(self) -> SessionLog:
        plan = plan_from_header(self.header)
        end = self.end or {}
        return SessionLog(
            subject_id=self.header["subject_id"],
            seed=self.header["seed"],
            agent=self.header["agent"],
            plan_kind=self.header["plan_kind"],
            plan=plan.entries,
            config=self.header["config"],
            trials=tuple(self.trials),
            complete=end.get("complete", False),
            aborted=end.get("aborted", not end.get("complete", False)),
            final_ms=end.get("final_ms"),
        )


def load_session_file(path: str | Path) -> SessionFile:
    path = Path(path)
    records: list[dict] = []
    header: dict | None = None
    events: list[InputEvent] = []
    starts: list[float] = []
    trials: list[TrialLog] = []
    end: dict | None = None
    with path.open(encoding="utf-8") as fp:
        for line_no, line in enumerate(fp, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise LogFormatError(str(path), line_no, f"invalid JSON: {exc}") from exc
            kind = record.get("rec")
            records.append(record)
            if kind == "header":
                header = record
            elif kind == "start":
                starts.append(record["t"])
            elif kind == "event":
                events.append(event_from_record(record))
            elif kind == "trial":
                trials.append(TrialLog.from_dict(record))
            elif kind == "end":
                end = record
            else:
                raise LogFormatError(str(path), line_no, f"unknown record kind {kind!r}")
    if header is None:
        raise LogFormatError(str(path), 0, "missing header record")
    return SessionFile(
        path=str(path),
        records=records,
        header=header,
        events=events,
        starts=starts,
        trials=trials,
        end=end,
    )


def serialize_records(records: Iterable[dict]) -> str:
    return "".join(canonical_line(r) + "\n" for r in records)


def session_log_lines(log: SessionLog) -> str:
    """Canonical serialization of a SessionLog (header, trials, end)."""
    header = {
        "rec": "header",
        "schema": SCHEMA_VERSION,
        "subject_id": log.subject_id,
        "seed": log.seed,
        "agent": log.agent,
        "plan_kind": log.plan_kind,
        "plan": [{"sentence_id": e.sentence_id, "block": e.block.value} for e in log.plan],
        "config": log.config,
    }
    records = [header]
    for trial in log.trials:
        record = {"rec": "trial"}
        record.update(trial.to_dict())
        records.append(record)
    records.append(
        {"rec": "end", "complete": log.complete, "aborted": log.aborted, "final_ms": log.final_ms}
    )
    return serialize_records(records)


def replay_session_state(corpus: CorpusFile, session_file: SessionFile) -> GameSession:
    """Rebuild a live session by feeding the recorded inputs to a fresh engine.

    Walks the file's records in order: ``start`` records start trials,
    ``event`` records feed the engine, the ``end`` record supplies the final
    clock.  ``trial`` records are skipped; the engine regenerates them.
    The returned session has no sink attached.
    """
    header = session_file.header
    session = GameSession(
        corpus,
        plan_from_header(header),
        EngineConfig.from_dict(header["config"]),
        agent=header["agent"],
        sink=None,
    )
    for record in session_file.records:
        kind = record.get("rec")
        if kind == "start":
            session.start_trial(record["t"])
        elif kind == "event":
            session.feed_input(event_from_record(record))
        elif kind == "end":
            final_ms = record.get("final_ms")
            if final_ms is not None:
                session.tick(final_ms)
            if record.get("aborted"):
                session.abort()
    return session


def replay_session(corpus: CorpusFile, session_file: SessionFile) -> SessionLog:
    """Re-derive a SessionLog from a file's recorded input stream."""
    return replay_session_state(corpus, session_file).to_session_log()


def load_log_dir(log_dir: str | Path, pattern: str = "*.jsonl") -> list[SessionFile]:
    log_dir = Path(log_dir)
    return [load_session_file(p) for p in sorted(log_dir.glob(pattern))]
