"""Perturbation patterns and the effect switch applied to each chunk."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from ..errors import RefocusError
from .chunks import AudioChunk

ONE_TONE = 2.0 ** (2.0 / 12.0)  # a whole tone: two equal-tempered semitones


class PerturbationPattern(Enum):
    """The four perturbations applied to the speech stream."""

    VOLUME_HALVE = "volume_halve"
    VOLUME_DOUBLE = "volume_double"
    PITCH_DOWN = "pitch_down"
    PITCH_UP = "pitch_up"

    @property
    def gain_factor(self) -> float | None:
        if self is PerturbationPattern.VOLUME_HALVE:
            return 0.5
        if self is PerturbationPattern.VOLUME_DOUBLE:
            return 2.0
        return None

    @property
    def pitch_ratio(self) -> float | None:
        if self is PerturbationPattern.PITCH_DOWN:
            return 1.0 / ONE_TONE
        if self is PerturbationPattern.PITCH_UP:
            return ONE_TONE
        return None

    @classmethod
    def parse(cls, name: str) -> "PerturbationPattern":
        key = name.strip().lower().replace("-", "_")
        for p in cls:
            if p.value == key:
                return p
        raise RefocusError(f"unknown perturbation pattern: {name!r}")


@dataclass(frozen=True)
class Mindless:
    """Apply one perturbation pattern to the stream."""

    pattern: PerturbationPattern


@dataclass(frozen=True)
class Alert:
    """Overlay the repeating beep alert on the stream."""


ALERT = Alert()

# None means bit-exact passthrough.
Effect = Union[Mindless, Alert, None]


def effect_to_wire(effect: Effect) -> str | None:
    if effect is None:
        return None
    if isinstance(effect, Alert):
        return "alert"
    return effect.pattern.value


def effect_from_wire(value: str | None) -> Effect:
    if value is None:
        return None
    if value == "alert":
        return ALERT
    return Mindless(PerturbationPattern.parse(value))


def apply_gain(chunk: AudioChunk, factor: float) -> AudioChunk:
    """Multiply the waveform by a gain factor, hard-clamped to [-1, 1]."""
    if not (isinstance(factor, (int, float)) and math.isfinite(factor)) or factor <= 0:
        raise ValueError(f"gain factor must be a positive finite number, got {factor!r}")
    return chunk.replace_samples(np.clip(chunk.samples * factor, -1.0, 1.0))
