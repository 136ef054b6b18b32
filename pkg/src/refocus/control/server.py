"""Routing server: the bridge between sensor, scheduler, client and console.

One dispatcher task serializes every state change (inbound messages,
part boundaries, toggle flushes), so the session log is a total order
and receipt timestamps are the single clock authority. Each connection
gets a dedicated sender task fed by a queue, which keeps per-recipient
delivery in log order without blocking the dispatcher.

Blinding: while a blinded session runs, records that could reveal the
condition (mode_set, condition_assigned, pattern_selected, activate,
deactivate, toggle_on, toggle_off) are withheld from the console and
replayed just before condition_reveal. Records carry their log position
`i`, so the console can reassemble the exact server log afterwards.

Session time runs at `time_scale` times wall speed; all logged
timestamps are session seconds. Scale 1 is real time.
"""
from __future__ import annotations

import asyncio
import itertools
import random
import time
from dataclasses import dataclass, field
from pathlib import Path

from websockets.asyncio.server import serve

from ..errors import DecodeError, DegenerateCalibration
from ..events import EventLog, SessionEvent
from ..scheduling import Scheduler, SchedulerConfig
from .messages import Message, decode, encode

# record types a blinded console may see while the session runs
CONSOLE_SAFE_TYPES = {
    "hello",
    "attention_state",
    "annotation",
    "calibration_start",
    "calibration_point",
    "calibration_done",
    "part_started",
    "session_end",
    "condition_reveal",
    "error",
}

CONDITION_BEARING_TYPES = {
    "mode_set",
    "condition_assigned",
    "pattern_selected",
    "activate",
    "deactivate",
    "toggle_on",
    "toggle_off",
}

PART_MODES = ("mindless", "alerting", "control")


class _Stop(Exception):
    """Internal dispatcher shutdown signal."""


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 0  # 0 picks an ephemeral port
    mode: str = "auto"  # auto: sensor triggers; manual: console annotations trigger
    parts: tuple[str, ...] = ("mindless", "alerting", "control")
    part_duration: float = 600.0
    seed: int = 0
    blinded: bool = False
    shuffle_parts: bool = False
    time_scale: float = 1.0
    toggle_period: float = 3.0
    treatment_probability: float = 0.5
    pattern_per_cycle: bool = False
    log_dir: Path = field(default_factory=lambda: Path("."))
    session_id: str = "session"
    require_calibration: bool | None = None  # default: required in auto mode
    wait_timeout: float = 30.0  # wall seconds to wait for required roles

    def __post_init__(self):
        if self.mode not in ("auto", "manual"):
            raise ValueError("mode must be auto or manual")
        for part in self.parts:
            if part not in PART_MODES:
                raise ValueError(f"unknown part mode {part!r}")
        if self.time_scale <= 0:
            raise ValueError("time_scale must be positive")
        self.log_dir = Path(self.log_dir)

    @property
    def calibration_required(self) -> bool:
        if self.require_calibration is None:
            return self.mode == "auto"
        return self.require_calibration


class _Connection:
    def __init__(self, ws, role: str):
        self.ws = ws
        self.role = role
        self.last_seq: int | None = None
        self.queue: asyncio.Queue = asyncio.Queue()
        self.sender_task: asyncio.Task | None = None

    async def _sender(self):
        try:
            while True:
                frame = await self.queue.get()
                if frame is None:
                    return
                await self.ws.send(frame)
        except Exception:
            return

    def start(self):
        self.sender_task = asyncio.create_task(self._sender())

    def send(self, frame: str):
        self.queue.put_nowait(frame)

    async def stop(self):
        self.queue.put_nowait(None)
        if self.sender_task is not None:
            await self.sender_task


class ControlServer:
    def __init__(self, config: ServerConfig):
        self.config = config
        self.port: int | None = None
        self.log = EventLog(config.log_dir / f"session-{config.session_id}.events.jsonl")
        self.connections: dict[str, _Connection] = {}
        self.queue: asyncio.Queue = asyncio.Queue()
        self._t0 = time.perf_counter()
        self._seq = itertools.count(1)  # server's own wire seq
        self.scheduler: Scheduler | None = None
        self._next_episode_id = 0
        self._part_order: list[str] | None = None
        self._current_part: int | None = None
        self._withheld: list[SessionEvent] = []
        self._revealed = False
        self._annotation_open = False
        self._calibrating = False
        self._calibration_points: list[tuple[float, float]] = []
        self._calibrated = False
        self._roles_ready = asyncio.Event()
        self._calibration_done = asyncio.Event()
        self._finished = asyncio.Event()

    # -- clock ---------------------------------------------------------

    def now(self) -> float:
        return (time.perf_counter() - self._t0) * self.config.time_scale

    async def sleep_session(self, seconds: float) -> None:
        await asyncio.sleep(seconds / self.config.time_scale)

    # -- sending -------------------------------------------------------

    def _send_message(self, role: str, type_: str, payload: dict) -> None:
        """Direct server message to one role (commands, acks, errors)."""
        conn = self.connections.get(role)
        if conn is None:
            return
        msg = Message(type=type_, t=self.now(), seq=next(self._seq), payload=payload)
        conn.send(encode(msg))

    def _deliver_record(self, role: str, event: SessionEvent) -> None:
        conn = self.connections.get(role)
        if conn is not None:
            conn.send(event.to_line())

    def _console_may_see(self, event: SessionEvent) -> bool:
        if not self.config.blinded or self._revealed:
            return True
        return event.type in CONSOLE_SAFE_TYPES

    def _log_event(self, event: SessionEvent) -> SessionEvent:
        """Append to the log and fan out the record to its viewers."""
        self.log.append(event)
        if self._console_may_see(event):
            self._deliver_record("console", event)
        else:
            self._withheld.append(event)
        if event.type in ("part_started", "session_end"):
            self._deliver_record("client", event)
            self._deliver_record("sensor", event)
        return event

    def _log_server_event(self, type_: str, payload: dict, t: float | None = None) -> SessionEvent:
        return self._log_event(
            SessionEvent(t=self.now() if t is None else t, type=type_, payload=payload)
        )

    def _log_error(self, reason: str, target_role: str | None = None, **extra) -> None:
        event = self._log_server_event("error", {"reason": reason, **extra})
        if target_role is not None and target_role != "console":
            self._deliver_record(target_role, event)

    # -- scheduler wiring ------------------------------------------------

    def _flush_scheduler(self, now: float) -> None:
        if self.scheduler is not None:
            self.scheduler.advance(now)

    def _effect_bearing(self, episode) -> bool:
        return episode.condition == "treatment" and self.scheduler.config.mode in (
            "mindless",
            "alerting",
        )

    def _start_part(self, index: int, mode: str) -> None:
        now = self.now()
        self._close_active_episode(now)
        self._current_part = index
        config = SchedulerConfig(
            toggle_period=self.config.toggle_period,
            treatment_probability=(
                self.config.treatment_probability if self.config.mode == "manual" else 1.0
            ),
            mode=mode,
            rng_seed=self.config.seed + index,
            pattern_per_cycle=self.config.pattern_per_cycle,
        )
        self.scheduler = Scheduler(
            config, log=_SchedulerTap(self), first_episode_id=self._next_episode_id
        )
        self._log_server_event("mode_set", {"part": index, "mode": mode}, t=now)
        self._log_server_event(
            "part_started", {"part": index, "duration": self.config.part_duration}, t=now
        )

    def _close_active_episode(self, now: float) -> None:
        if self.scheduler is None:
            return
        if self.scheduler.active_episode is not None:
            episode = self.scheduler.deactivate(now)
            if self._effect_bearing(episode):
                self._send_message("client", "deactivate", {"episode": episode.episode_id})
        self._next_episode_id = self.scheduler._next_id

    def _trigger_activate(self, now: float) -> None:
        if self.scheduler is None or self.scheduler.active_episode is not None:
            return
        episode = self.scheduler.activate(now)
        self._next_episode_id = self.scheduler._next_id
        if self._effect_bearing(episode):
            payload = {
                "episode": episode.episode_id,
                "mode": self.scheduler.config.mode,
                "toggle_period": self.config.toggle_period,
            }
            if episode.pattern is not None:
                payload["pattern"] = episode.pattern.value
            self._send_message("client", "activate", payload)

    def _trigger_deactivate(self, now: float) -> None:
        if self.scheduler is None or self.scheduler.active_episode is None:
            return
        episode = self.scheduler.deactivate(now)
        self._next_episode_id = self.scheduler._next_id
        if self._effect_bearing(episode):
            self._send_message("client", "deactivate", {"episode": episode.episode_id})

    # -- message processing (dispatcher context only) ----------------------

    def _check_required_roles(self) -> None:
        need = {"client"}
        if self.config.mode == "auto":
            need.add("sensor")
        if need.issubset(self.connections):
            self._roles_ready.set()

    def _register(self, ws, message: Message, receipt: float):
        role = message.payload["role"]
        if role in self.connections:
            asyncio.ensure_future(_best_effort_send(ws, encode(Message(
                "error", self.now(), next(self._seq),
                {"reason": f"role {role!r} is already connected"}))))
            return None
        conn = _Connection(ws, role)
        conn.last_seq = message.seq
        conn.start()
        self.connections[role] = conn
        hello = SessionEvent(t=receipt, type="hello", payload=dict(message.payload),
                             sender=role, seq=message.seq, sender_t=message.t)
        self._log_event(hello)
        descriptor = {
            "session_id": self.config.session_id,
            "blinded": self.config.blinded,
            "parts": len(self.config.parts),
            "part_duration": self.config.part_duration,
            "time_scale": self.config.time_scale,
        }
        if not (self.config.blinded and role == "console"):
            descriptor["mode"] = self.config.mode
        self._send_message(role, "hello", {"role": "server", "descriptor": descriptor})
        if role == "console":
            # replay the backlog so the console view is complete from t=0
            for past in self.log.events:
                if past.i != hello.i and self._console_may_see(past):
                    self._deliver_record("console", past)
        self._check_required_roles()
        return conn

    def _process_inbound(self, conn: _Connection, message: Message, receipt: float) -> None:
        role = conn.role
        if conn.last_seq is not None and message.seq <= conn.last_seq:
            self._log_error(
                f"seq {message.seq} is not greater than {conn.last_seq}",
                target_role=role, sender=role,
            )
            return
        conn.last_seq = message.seq
        self._flush_scheduler(receipt)

        if message.type == "annotation" and role == "console":
            # strict start/refocus alternation; out-of-order presses are
            # rejected so the annotation stream stays well formed
            mark = message.payload["mark"]
            expected = "refocus" if self._annotation_open else "distraction_start"
            if mark != expected:
                self._log_error(f"annotation {mark!r} out of order, expected {expected!r}",
                                target_role=role, sender=role)
                return
            self._annotation_open = mark == "distraction_start"

        event = SessionEvent(t=receipt, type=message.type, payload=dict(message.payload),
                             sender=role, seq=message.seq,
                             sender_t=message.t if message.t != receipt else None)
        self._log_event(event)

        if message.type == "attention_state" and role == "sensor":
            if self.config.mode == "auto" and self._current_part is not None:
                if message.payload["state"] == "distracted":
                    self._trigger_activate(receipt)
                else:
                    self._trigger_deactivate(receipt)
        elif message.type == "annotation" and role == "console":
            if self.config.mode == "manual" and self._current_part is not None:
                if message.payload["mark"] == "distraction_start":
                    self._trigger_activate(receipt)
                else:
                    self._trigger_deactivate(receipt)
        elif message.type == "calibration_start":
            self._calibrating = True
            self._calibration_points = []
            self._deliver_record("sensor", event)
        elif message.type == "calibration_point" and role == "sensor":
            if self._calibrating:
                self._calibration_points.append(
                    (float(message.payload["yaw"]), float(message.payload["pitch"]))
                )
        elif message.type == "calibration_done":
            self._finish_calibration(receipt)

    def _finish_calibration(self, receipt: float) -> None:
        self._calibrating = False
        try:
            if not self._calibration_points:
                raise DegenerateCalibration("no calibration points collected")
            yaws = [p[0] for p in self._calibration_points]
            pitches = [p[1] for p in self._calibration_points]
            if min(yaws) >= max(yaws) or min(pitches) >= max(pitches):
                raise DegenerateCalibration("no head movement detected on some axis")
        except DegenerateCalibration as exc:
            self._log_error(str(exc), target_role="console")
            return
        profile = {
            "yaw_min": min(yaws),
            "yaw_max": max(yaws),
            "pitch_min": min(pitches),
            "pitch_max": max(pitches),
            "captured_at": receipt,
        }
        self._log_server_event("calibration_done", {"profile": profile})
        self._calibrated = True
        self._calibration_done.set()

    # -- dispatcher -------------------------------------------------------

    async def _dispatcher(self):
        while True:
            item = await self.queue.get()
            try:
                self._dispatch_one(item)
            except _Stop:
                return
            except Exception as exc:  # the dispatcher must survive anything
                try:
                    self._log_error(f"internal error: {exc!r}")
                except Exception:
                    pass
                if item[0] == "register" and not item[4].done():
                    item[4].set_result(None)

    def _dispatch_one(self, item) -> None:
        kind = item[0]
        if kind == "stop":
            raise _Stop
        if kind == "register":
            _, ws, message, receipt, reply = item
            reply.set_result(self._register(ws, message, receipt))
        elif kind == "frame":
            _, conn, raw, receipt = item
            try:
                message = decode(raw)
            except DecodeError as exc:
                self._log_error(str(exc), target_role=conn.role, sender=conn.role)
                return
            self._process_inbound(conn, message, receipt)
        elif kind == "disconnect":
            _, role, part = item
            self._flush_scheduler(self.now())
            self._log_error(f"role {role!r} disconnected, part degraded",
                            part=part if part is not None else -1)
        elif kind == "log_error":
            self._log_error(item[1])
        elif kind == "tick":
            self._flush_scheduler(self.now())
        elif kind == "part":
            _, index, mode = item
            self._flush_scheduler(self.now())
            self._start_part(index, mode)
        elif kind == "end":
            now = self.now()
            self._flush_scheduler(now)
            self._close_active_episode(now)
            self._current_part = None
            self._log_server_event("session_end", {})
            self._reveal()
            self._finished.set()

    def _reveal(self) -> None:
        """Reveal first, then replay: the condition_reveal record marks the
        blinding boundary, and every record delivered after it fills in the
        withheld positions until the console holds the complete log."""
        self._revealed = True
        self._log_server_event("condition_reveal", {"order": self.part_order()})
        for event in self._withheld:
            self._deliver_record("console", event)
        self._withheld = []

    # -- connection handling ------------------------------------------------

    async def _handler(self, ws):
        conn: _Connection | None = None
        try:
            async for raw in ws:
                receipt = self.now()
                if conn is None:
                    try:
                        message = decode(raw)
                    except DecodeError as exc:
                        await _best_effort_send(ws, encode(Message(
                            "error", self.now(), next(self._seq), {"reason": str(exc)})))
                        continue
                    if message.type != "hello":
                        await _best_effort_send(ws, encode(Message(
                            "error", self.now(), next(self._seq),
                            {"reason": "first message must be hello"})))
                        continue
                    reply = asyncio.get_running_loop().create_future()
                    self.queue.put_nowait(("register", ws, message, receipt, reply))
                    conn = await reply
                    if conn is None:
                        await ws.close()
                        return
                else:
                    self.queue.put_nowait(("frame", conn, raw, receipt))
        finally:
            if conn is not None and self.connections.get(conn.role) is conn:
                del self.connections[conn.role]
                if not self._finished.is_set():
                    self.queue.put_nowait(("disconnect", conn.role, self._current_part))

    # -- session orchestration ------------------------------------------------

    def part_order(self) -> list[str]:
        if self._part_order is None:
            order = list(self.config.parts)
            if self.config.shuffle_parts:
                random.Random(self.config.seed).shuffle(order)
            self._part_order = order
        return self._part_order

    async def _run_session(self):
        try:
            await asyncio.wait_for(self._roles_ready.wait(), timeout=self.config.wait_timeout)
        except asyncio.TimeoutError:
            self.queue.put_nowait(("log_error", "required roles did not connect in time"))
            self.queue.put_nowait(("end",))
            return
        if self.config.calibration_required and not self._calibrated:
            try:
                await asyncio.wait_for(self._calibration_done.wait(),
                                       timeout=self.config.wait_timeout)
            except asyncio.TimeoutError:
                self.queue.put_nowait(("log_error", "calibration did not complete in time"))
                self.queue.put_nowait(("end",))
                return
        for index, mode in enumerate(self.part_order()):
            self.queue.put_nowait(("part", index, mode))
            await self.sleep_session(self.config.part_duration)
        self.queue.put_nowait(("end",))

    async def _ticker(self):
        interval = self.config.toggle_period / 4.0
        while True:
            await self.sleep_session(interval)
            self.queue.put_nowait(("tick",))

    async def run(self) -> Path:
        """Serve one full session, then shut down. Returns the log path."""
        dispatcher = asyncio.create_task(self._dispatcher())
        ticker = asyncio.create_task(self._ticker())
        async with serve(self._handler, self.config.host, self.config.port) as server:
            self.port = next(iter(server.sockets)).getsockname()[1]
            await self._run_session()
            await self._finished.wait()
            # let per-connection senders drain before tearing down
            await asyncio.sleep(0.2)
            ticker.cancel()
            self.queue.put_nowait(("stop",))
            await dispatcher
            for conn in list(self.connections.values()):
                await conn.stop()
                try:
                    await conn.ws.close()
                except Exception:
                    pass
        self.log.close()
        return self.log.path


class _SchedulerTap:
    """EventLog stand-in that funnels scheduler events into the server log."""

    def __init__(self, server: ControlServer):
        self._server = server

    def append(self, event: SessionEvent) -> SessionEvent:
        return self._server._log_event(event)


async def _best_effort_send(ws, frame: str) -> None:
    try:
        await ws.send(frame)
    except Exception:
        pass
