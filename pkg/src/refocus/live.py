"""Live PCM processing: raw 16-bit frames in on stdin, processed frames
out on stdout, 1000 samples per frame at the default rate.

The effect either stays fixed for the whole stream or follows a control
server: activation commands carry the episode's mode, pattern and
toggle period, and the client cycles the perturbation locally on its
own clock, exactly until the deactivation command arrives. The audio
loop reads one effect snapshot per frame through a mailbox, so effect
changes land on frame boundaries.
"""
from __future__ import annotations

import asyncio
import json
import sys
import threading
import time

import numpy as np

from .audio.chunks import AudioChunk, chunk_length
from .audio.effects import ALERT, Effect, Mindless, PerturbationPattern, effect_from_wire
from .audio.engine import AudioEngine
from .audio.pcm import float_to_int16, int16_to_float


class WireEffectSource:
    """Effect schedule driven by activate/deactivate commands.

    Mindless episodes alternate pattern-on and off every toggle_period
    seconds from the activation instant; alerting episodes hold the
    alert until deactivation (the beep's own period lives in the audio
    engine). Thread-safe: the control thread feeds commands, the audio
    thread polls current().
    """

    def __init__(self, clock=time.monotonic):
        self._lock = threading.Lock()
        self._clock = clock
        self._mode: str | None = None
        self._pattern: PerturbationPattern | None = None
        self._period = 3.0
        self._activated_at: float | None = None

    def handle_command(self, type_: str, payload: dict) -> None:
        with self._lock:
            if type_ == "activate":
                self._mode = payload.get("mode")
                name = payload.get("pattern")
                self._pattern = PerturbationPattern.parse(name) if name else None
                self._period = float(payload.get("toggle_period", 3.0))
                self._activated_at = self._clock()
            elif type_ in ("deactivate", "session_end"):
                self._activated_at = None

    def current(self) -> Effect:
        with self._lock:
            if self._activated_at is None:
                return None
            if self._mode == "alerting":
                return ALERT
            if self._mode == "mindless" and self._pattern is not None:
                elapsed = self._clock() - self._activated_at
                k = int(elapsed // self._period)
                return Mindless(self._pattern) if k % 2 == 0 else None
            return None


class ConstantEffectSource:
    def __init__(self, effect: Effect):
        self._effect = effect

    def current(self) -> Effect:
        return self._effect


def parse_effect(name: str) -> Effect:
    key = name.strip().lower().replace("-", "_")
    if key in ("none", ""):
        return None
    return effect_from_wire(key)


def run_stream(source, stdin, stdout, sample_rate: int = 16_000) -> int:
    """Pump frames from stdin to stdout until EOF; returns frame count."""
    engine = AudioEngine(sample_rate)
    frame_samples = chunk_length(sample_rate)
    frame_bytes = frame_samples * 2
    start_index = 0
    frames = 0
    while True:
        raw = stdin.read(frame_bytes)
        if not raw:
            break
        valid = len(raw) // 2
        if len(raw) < frame_bytes:
            raw = raw + b"\x00" * (frame_bytes - len(raw))
        samples = int16_to_float(np.frombuffer(raw, dtype="<i2"))
        chunk = AudioChunk(samples, sample_rate, start_index,
                           valid_length=valid if valid < frame_samples else None)
        processed = engine.process(chunk, source.current())
        stdout.write(float_to_int16(processed.valid_samples()).astype("<i2").tobytes())
        stdout.flush()
        start_index += frame_samples
        frames += 1
    return frames


async def _follow_server(url: str, source: WireEffectSource) -> None:
    from websockets.asyncio.client import connect

    async with connect(url) as ws:
        hello = {"type": "hello", "t": 0.0, "seq": 1, "payload": {"role": "client"}}
        await ws.send(json.dumps(hello))
        async for frame in ws:
            try:
                record = json.loads(frame)
            except json.JSONDecodeError:
                continue
            if isinstance(record, dict) and "type" in record:
                source.handle_command(str(record["type"]), dict(record.get("payload", {})))


def run_live(url: str | None, fixed_effect: Effect, sample_rate: int = 16_000) -> int:
    """Entry point for the live subcommand."""
    if url:
        source = WireEffectSource()
        thread = threading.Thread(
            target=lambda: asyncio.run(_follow_server(url, source)), daemon=True
        )
        thread.start()
    else:
        source = ConstantEffectSource(fixed_effect)
    return run_stream(source, sys.stdin.buffer, sys.stdout.buffer, sample_rate)
