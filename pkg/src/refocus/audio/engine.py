"""Per-chunk effect dispatch with persistent streaming state.

The engine runs in the real-time processing context. Effect changes
arrive from the control context through an EffectMailbox and are read
once per chunk, so a chunk is processed under exactly one effect.
"""
from __future__ import annotations

import threading

from .beep import BeepSpec, synthesize_beep
from .chunks import AudioChunk
from .effects import ALERT, Alert, Effect, Mindless, apply_gain
from .vocoder import PitchShifter

import numpy as np


class EffectMailbox:
    """Single-slot, atomically published effect shared between contexts.

    Writers replace the slot; the audio context reads a snapshot once
    per chunk. Readers never block writers.
    """

    def __init__(self, initial: Effect = None):
        self._lock = threading.Lock()
        self._effect: Effect = initial

    def publish(self, effect: Effect) -> None:
        with self._lock:
            self._effect = effect

    def snapshot(self) -> Effect:
        with self._lock:
            return self._effect


class AudioEngine:
    """Applies the current effect to each chunk of the stream.

    Pitch shifter state is kept per ratio and reset whenever its effect
    is switched on after being off, so every on-phase starts from a
    clean deterministic state. Time for the beep overlay comes from the
    sample clock (chunk.start_index), never the wall clock.
    """

    def __init__(self, sample_rate: int = 16_000, beep: BeepSpec | None = None):
        self.sample_rate = sample_rate
        self.beep = beep or BeepSpec()
        self._shifters: dict[float, PitchShifter] = {}
        self._last_effect: Effect = None
        self._alert_since: int | None = None  # start_index of alert activation

    def _shifter(self, ratio: float) -> PitchShifter:
        state = self._shifters.get(ratio)
        if state is None:
            state = PitchShifter(ratio, self.sample_rate)
            self._shifters[ratio] = state
        return state

    def process(self, chunk: AudioChunk, effect: Effect) -> AudioChunk:
        try:
            if effect is None:
                return chunk
            if isinstance(effect, Mindless):
                gain = effect.pattern.gain_factor
                if gain is not None:
                    return apply_gain(chunk, gain)
                ratio = effect.pattern.pitch_ratio
                state = self._shifter(ratio)
                if self._last_effect != effect:
                    state.reset()
                return state.process(chunk)
            if isinstance(effect, Alert):
                if not isinstance(self._last_effect, Alert):
                    self._alert_since = chunk.start_index
                elapsed = (chunk.start_index - self._alert_since) / self.sample_rate
                overlay = synthesize_beep(self.beep, elapsed, len(chunk), self.sample_rate)
                return chunk.replace_samples(np.clip(chunk.samples + overlay, -1.0, 1.0))
            raise ValueError(f"unknown effect: {effect!r}")
        finally:
            self._last_effect = effect


def process_chunk(engine: AudioEngine, chunk: AudioChunk, effect: Effect) -> AudioChunk:
    return engine.process(chunk, effect)
