"""Append-only session event log and its line format.

Every record is one canonical JSON object per line:

    {"i": <log position>, "payload": {...}, "seq": <per-sender counter>,
     "sender": "<client|sensor|console|server>", "t": <server seconds>,
     "type": "<record type>"}

plus an optional "sender_t" carrying the sender's own timestamp when it
differs from server receipt time. Keys are sorted and separators are
compact, so a record has exactly one byte representation. Analytics,
replay and the console exporter all consume this format.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import DecodeError, StateError

# record types produced by the scheduler / session machinery, on top of
# the wire message types that get logged when routed
SCHEDULER_EVENT_TYPES = {
    "activate",
    "deactivate",
    "toggle_on",
    "toggle_off",
    "pattern_selected",
    "condition_assigned",
    "annotation",
    "detection_change",
    "mode_set",
}


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


@dataclass
class SessionEvent:
    t: float
    type: str
    payload: dict = field(default_factory=dict)
    sender: str = "server"
    seq: int = 0
    i: int | None = None
    sender_t: float | None = None

    def to_record(self) -> dict:
        record = {
            "i": self.i,
            "t": self.t,
            "type": self.type,
            "sender": self.sender,
            "seq": self.seq,
            "payload": self.payload,
        }
        if self.sender_t is not None:
            record["sender_t"] = self.sender_t
        return record

    def to_line(self) -> str:
        return canonical_json(self.to_record())

    @classmethod
    def from_record(cls, record: dict) -> "SessionEvent":
        try:
            return cls(
                t=float(record["t"]),
                type=str(record["type"]),
                payload=dict(record.get("payload", {})),
                sender=str(record.get("sender", "server")),
                seq=int(record.get("seq", 0)),
                i=record.get("i"),
                sender_t=record.get("sender_t"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DecodeError(f"bad event record: {exc}") from exc

    @classmethod
    def from_line(cls, line: str) -> "SessionEvent":
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DecodeError(exc.msg, offset=exc.pos) from exc
        if not isinstance(record, dict):
            raise DecodeError("event line is not an object")
        return cls.from_record(record)


class EventLog:
    """In-memory append-only log with optional write-through to a file.

    Appends must have non-decreasing timestamps; an out-of-order event
    is rejected and the log is left unchanged.
    """

    def __init__(self, path: str | Path | None = None):
        self.events: list[SessionEvent] = []
        self._path = Path(path) if path is not None else None
        self._fh = None
        if self._path is not None:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            self._fh = open(self._path, "w", encoding="utf-8")

    @property
    def path(self) -> Path | None:
        return self._path

    def append(self, event: SessionEvent) -> SessionEvent:
        if self.events and event.t < self.events[-1].t - 1e-9:
            raise StateError(
                f"event at t={event.t} is earlier than the last logged t={self.events[-1].t}"
            )
        event.i = len(self.events)
        self.events.append(event)
        if self._fh is not None:
            self._fh.write(event.to_line() + "\n")
            self._fh.flush()
        return event

    def extend(self, events: Iterable[SessionEvent]) -> None:
        for event in events:
            self.append(event)

    def __iter__(self) -> Iterator[SessionEvent]:
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def dump(self) -> str:
        return "".join(e.to_line() + "\n" for e in self.events)


def write_events(path: str | Path, events: Iterable[SessionEvent]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for event in events:
            fh.write(event.to_line() + "\n")


def read_events(path: str | Path) -> list[SessionEvent]:
    events = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                events.append(SessionEvent.from_line(line))
    return events
