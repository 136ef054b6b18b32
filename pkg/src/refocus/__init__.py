"""Attention-intervention toolkit.

Subpackages:

- audio: chunked real-time perturbation engine (gain, pitch, beep)
- scheduling: intervention episodes, cycling, blinded condition draws
- sensor: head pose from landmarks, calibration, off-screen judgment
- control: wire protocol, routing server, scripted session fixtures
- analytics: episode metrics, confusion matrices, hypothesis tests
- simulate: deterministic synthetic sessions for desk-scale runs
"""

from . import analytics, audio, control, sensor
from .errors import (
    DecodeError,
    DegenerateCalibration,
    DegenerateLandmarks,
    InsufficientData,
    MalformedLog,
    RefocusError,
    SpanMismatch,
    StateError,
    UnsupportedFormat,
)
from .events import EventLog, SessionEvent, read_events, write_events
from .scheduling import InterventionEpisode, Scheduler, SchedulerConfig, replay
from .simulate import BehaviorParams, SimulationConfig, simulate

__version__ = "0.1.0"

__all__ = [
    "BehaviorParams",
    "DecodeError",
    "DegenerateCalibration",
    "DegenerateLandmarks",
    "EventLog",
    "InsufficientData",
    "InterventionEpisode",
    "MalformedLog",
    "RefocusError",
    "Scheduler",
    "SchedulerConfig",
    "SessionEvent",
    "SimulationConfig",
    "SpanMismatch",
    "StateError",
    "UnsupportedFormat",
    "analytics",
    "audio",
    "control",
    "read_events",
    "replay",
    "sensor",
    "simulate",
    "write_events",
]
