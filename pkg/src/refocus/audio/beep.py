"""The alert beep: a short ramped sine burst repeated on a fixed period."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BeepSpec:
    duration: float = 0.1  # seconds of each burst
    period: float = 3.0  # seconds between burst starts
    frequency: float = 1000.0  # Hz
    amplitude: float = 0.5  # linear, pre-mix
    ramp: float = 0.005  # linear fade at both burst edges, seconds

    def __post_init__(self):
        if not self.duration < self.period:
            raise ValueError("beep duration must be shorter than its period")
        if not 2.0 * self.ramp < self.duration:
            raise ValueError("ramps must fit inside the burst")
        if self.frequency <= 0 or self.amplitude <= 0 or self.ramp < 0:
            raise ValueError("frequency, amplitude and ramp must be positive")


def synthesize_beep(
    spec: BeepSpec,
    time_since_activation: float,
    length: int,
    sample_rate: int,
) -> np.ndarray:
    """Additive overlay for one chunk of the repeating beep.

    time_since_activation is the chunk start relative to the alert
    activation. A burst starts at every multiple of spec.period since
    activation; everywhere else the overlay is zero. Each burst is
    identical (its sine phase restarts at the burst edge).
    """
    if time_since_activation < 0:
        raise ValueError("time_since_activation must be non-negative")
    t = time_since_activation + np.arange(length) / sample_rate
    u = np.mod(t, spec.period)  # time within the current period
    in_burst = u < spec.duration
    envelope = np.zeros(length)
    if np.any(in_burst):
        ub = u[in_burst]
        env = np.ones(ub.shape)
        if spec.ramp > 0:
            env = np.minimum(env, ub / spec.ramp)
            env = np.minimum(env, (spec.duration - ub) / spec.ramp)
        envelope[in_burst] = np.clip(env, 0.0, 1.0)
    return spec.amplitude * envelope * np.sin(2.0 * np.pi * spec.frequency * u)
