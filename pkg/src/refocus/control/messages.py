"""Wire message schema and canonical encoding.

One message per WebSocket text frame. A frame is canonical JSON
(sorted keys, compact separators) with top-level fields `type`, `t`
(sender seconds), `seq` (strictly increasing per sender) and `payload`
(type-specific). Unknown types and missing payload fields are decode
errors that name the problem; the connection stays open.

Log records reuse this encoding with extra routing metadata (see
refocus.events); the console-facing frames are exactly log records.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import DecodeError
from ..events import canonical_json

ROLES = ("client", "sensor", "console")

# required payload fields per message type
MESSAGE_TYPES: dict[str, tuple[str, ...]] = {
    "hello": ("role",),
    "activate": ("episode",),
    "deactivate": ("episode",),
    "attention_state": ("state",),
    "annotation": ("mark",),
    "calibration_start": (),
    "calibration_point": ("yaw", "pitch"),
    "calibration_done": (),
    "mode_set": ("mode",),
    "condition_reveal": ("order",),
    "session_end": (),
    "error": ("reason",),
}


@dataclass(frozen=True)
class Message:
    type: str
    t: float
    seq: int
    payload: dict = field(default_factory=dict)

    def validate(self) -> "Message":
        if self.type not in MESSAGE_TYPES:
            raise DecodeError(f"unknown message type {self.type!r}")
        for name in MESSAGE_TYPES[self.type]:
            if name not in self.payload:
                raise DecodeError(f"message type {self.type!r} is missing payload field {name!r}")
        if self.type == "hello" and self.payload.get("role") not in ROLES + ("server",):
            raise DecodeError(f"hello role must be one of {ROLES}")
        if self.type == "annotation" and self.payload.get("mark") not in (
            "distraction_start",
            "refocus",
        ):
            raise DecodeError("annotation mark must be distraction_start or refocus")
        if self.type == "attention_state" and self.payload.get("state") not in (
            "attentive",
            "distracted",
        ):
            raise DecodeError("attention_state state must be attentive or distracted")
        return self

    def to_record(self) -> dict:
        return {"type": self.type, "t": self.t, "seq": self.seq, "payload": self.payload}


def encode(message: Message) -> str:
    message.validate()
    return canonical_json(message.to_record())


def decode(frame: str | bytes) -> Message:
    if isinstance(frame, bytes):
        try:
            frame = frame.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DecodeError("frame is not valid UTF-8", offset=exc.start) from exc
    try:
        record = json.loads(frame)
    except json.JSONDecodeError as exc:
        raise DecodeError(exc.msg, offset=exc.pos) from exc
    if not isinstance(record, dict):
        raise DecodeError("frame is not a JSON object")
    for name in ("type", "t", "seq"):
        if name not in record:
            raise DecodeError(f"frame is missing field {name!r}")
    try:
        message = Message(
            type=str(record["type"]),
            t=float(record["t"]),
            seq=int(record["seq"]),
            payload=dict(record.get("payload", {})),
        )
    except (TypeError, ValueError) as exc:
        raise DecodeError(f"bad field value: {exc}") from exc
    return message.validate()
