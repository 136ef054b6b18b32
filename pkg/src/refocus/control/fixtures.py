"""Scripted client, sensor and console for desk-scale sessions.

Each fixture connects over a real WebSocket, speaks the wire format,
and follows a timed script on the session clock (scaled like the
server's). They record everything they receive, so tests can inspect
client commands and the console transcript, and the console fixture
performs the export: its received records, ordered by log position,
must reproduce the server's log byte for byte.
"""
from __future__ import annotations

import asyncio
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from websockets.asyncio.client import connect

from ..events import SessionEvent
from .messages import Message, encode


@dataclass
class ScriptAction:
    t: float  # session seconds, relative to the first part start
    type: str
    payload: dict = field(default_factory=dict)


def load_script(path: str | Path) -> list[ScriptAction]:
    actions = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            actions.append(ScriptAction(float(record["t"]), record["type"],
                                        dict(record.get("payload", {}))))
    return sorted(actions, key=lambda a: a.t)


def write_script(path: str | Path, actions: list[ScriptAction]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for action in actions:
            fh.write(json.dumps(
                {"t": action.t, "type": action.type, "payload": action.payload},
                sort_keys=True, separators=(",", ":")) + "\n")


class ScriptedRole:
    """Connects with one role, replays a script, records all frames."""

    def __init__(self, url: str, role: str, script: list[ScriptAction] | None = None,
                 time_scale: float = 1.0):
        self.url = url
        self.role = role
        self.script = script or []
        self.time_scale = time_scale
        self.frames: list[str] = []  # every received frame, verbatim
        self.records: list[SessionEvent] = []  # frames that are log records
        self.messages: list[Message] = []  # direct server messages
        self._seq = 0
        self._t0: float | None = None  # wall time of the first part start
        self._part_started = asyncio.Event()
        self._ended = asyncio.Event()
        self._expect_total: int | None = None

    def _next_seq(self) -> int:
        self._seq += 1
        return self._seq

    def session_now(self) -> float:
        if self._t0 is None:
            return 0.0
        return (time.perf_counter() - self._t0) * self.time_scale

    async def _send(self, ws, type_: str, payload: dict) -> None:
        msg = Message(type=type_, t=self.session_now(), seq=self._next_seq(), payload=payload)
        await ws.send(encode(msg))

    def _on_frame(self, frame: str) -> None:
        self.frames.append(frame)
        record = json.loads(frame)
        if "i" in record and record["i"] is not None:
            event = SessionEvent.from_record(record)
            self.records.append(event)
            if event.type == "part_started" and event.payload.get("part") == 0:
                self._t0 = time.perf_counter()
                self._part_started.set()
            if event.type == "condition_reveal":
                # withheld records are replayed after the reveal; the log is
                # complete once every position up to the reveal has arrived
                self._expect_total = event.i + 1
            if self._expect_total is not None:
                if len({e.i for e in self.records}) >= self._expect_total:
                    self._ended.set()
        else:
            self.messages.append(Message(record["type"], record["t"], record["seq"],
                                         record.get("payload", {})))

    async def _reader(self, ws):
        try:
            async for frame in ws:
                self._on_frame(frame)
        except Exception:
            pass
        finally:
            self._ended.set()

    async def pre_session(self, ws) -> None:
        """Hook for behavior between hello and the first part."""

    async def _wait_any(self, *events: asyncio.Event) -> None:
        waits = [asyncio.create_task(e.wait()) for e in events]
        try:
            await asyncio.wait(waits, return_when=asyncio.FIRST_COMPLETED)
        finally:
            for task in waits:
                task.cancel()

    async def run(self) -> None:
        async with connect(self.url) as ws:
            await self._send(ws, "hello", {"role": self.role})
            reader = asyncio.create_task(self._reader(ws))
            try:
                await self.pre_session(ws)
                # an aborted session never starts its first part
                await self._wait_any(self._part_started, self._ended)
                if self._part_started.is_set():
                    for action in self.script:
                        delay = (action.t - self.session_now()) / self.time_scale
                        if delay > 0:
                            await asyncio.sleep(delay)
                        await self._send(ws, action.type, action.payload)
                await self._ended.wait()
            finally:
                reader.cancel()


class ScriptedSensor(ScriptedRole):
    """Streams attention_state flips; answers calibration_start."""

    def __init__(self, url: str, script=None, time_scale: float = 1.0,
                 calibration_sweep: list[tuple[float, float]] | None = None):
        super().__init__(url, "sensor", script, time_scale)
        self.calibration_sweep = calibration_sweep or [
            (-24.0, -14.0), (0.0, 0.0), (26.0, 12.0), (12.0, -10.0), (-8.0, 15.0),
        ]
        self._ws = None

    def _on_frame(self, frame: str) -> None:
        super()._on_frame(frame)
        record = json.loads(frame)
        if record.get("type") == "calibration_start" and self._ws is not None:
            asyncio.ensure_future(self._stream_calibration())

    async def _stream_calibration(self) -> None:
        for yaw, pitch in self.calibration_sweep:
            await self._send(self._ws, "calibration_point", {"yaw": yaw, "pitch": pitch})
            await asyncio.sleep(0.01)

    async def pre_session(self, ws) -> None:
        self._ws = ws


class ScriptedConsole(ScriptedRole):
    """Sends annotations, runs the calibration wizard, exports the log."""

    def __init__(self, url: str, script=None, time_scale: float = 1.0,
                 run_calibration: bool = False):
        super().__init__(url, "console", script, time_scale)
        self.run_calibration = run_calibration

    async def pre_session(self, ws) -> None:
        if self.run_calibration:
            await self._wait_for_role("sensor")
            await self._send(ws, "calibration_start", {})
            await asyncio.sleep(0.2)  # wall time; sensor streams its sweep
            await self._send(ws, "calibration_done", {})

    async def _wait_for_role(self, role: str, timeout: float = 10.0) -> None:
        async def _poll():
            while not any(
                e.type == "hello" and e.payload.get("role") == role for e in self.records
            ):
                await asyncio.sleep(0.01)

        await asyncio.wait_for(_poll(), timeout=timeout)

    def pre_reveal_frames(self) -> list[str]:
        """Frames received before the condition reveal, for blinding checks."""
        out = []
        for frame in self.frames:
            record = json.loads(frame)
            if record.get("type") == "condition_reveal":
                break
            out.append(frame)
        return out

    def export_log(self) -> str:
        """Reassemble the server log from received records, by position."""
        ordered = sorted({e.i: e for e in self.records}.values(), key=lambda e: e.i)
        return "".join(e.to_line() + "\n" for e in ordered)


@dataclass
class ScriptedRun:
    log_path: Path
    client: ScriptedRole
    sensor: ScriptedSensor | None
    console: ScriptedConsole | None


async def run_scripted_session(
    server,
    sensor_script: list[ScriptAction] | None = None,
    console_script: list[ScriptAction] | None = None,
    with_console: bool = True,
) -> ScriptedRun:
    """Run a server together with in-process scripted roles."""
    scale = server.config.time_scale
    server_task = asyncio.create_task(server.run())
    while server.port is None:
        if server_task.done():
            server_task.result()  # raise the startup failure
        await asyncio.sleep(0.01)
    url = f"ws://{server.config.host}:{server.port}"
    client = ScriptedRole(url, "client", time_scale=scale)
    roles = [client]
    sensor = None
    if server.config.mode == "auto" or sensor_script:
        sensor = ScriptedSensor(url, sensor_script, time_scale=scale)
        roles.append(sensor)
    console = None
    if with_console:
        console = ScriptedConsole(url, console_script, time_scale=scale,
                                  run_calibration=server.config.calibration_required)
        roles.append(console)
    results = await asyncio.gather(*(r.run() for r in roles), server_task,
                                   return_exceptions=True)
    for result in results:
        if isinstance(result, Exception):
            raise result
    return ScriptedRun(server.log.path, client, sensor, console)
