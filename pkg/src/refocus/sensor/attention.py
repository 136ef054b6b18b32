"""Off-screen judgment and debounced attention state changes.

judge() is the raw per-frame rule: attentive iff yaw and pitch both lie
inside the calibrated range, bounds inclusive (the calibration extremes
were on-screen by construction). Roll is ignored. The Debouncer then
requires k consecutive frames of the opposite state before flipping,
which suppresses single-frame solver jitter at 15 FPS.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .calibration import CalibrationProfile
from .geometry import CameraModel, FaceModel3D, HeadPose
from .landmarks import LandmarkFrame
from .pnp import solve_head_pose

ATTENTIVE = "attentive"
DISTRACTED = "distracted"

DEFAULT_DEBOUNCE_FRAMES = 3
DEFAULT_FPS = 15.0


def judge(pose: HeadPose, profile: CalibrationProfile) -> str:
    on_screen = (
        profile.yaw_min <= pose.yaw <= profile.yaw_max
        and profile.pitch_min <= pose.pitch <= profile.pitch_max
    )
    return ATTENTIVE if on_screen else DISTRACTED


@dataclass(frozen=True)
class StateChange:
    t: float  # timestamp of the first frame of the supporting run
    state: str


class Debouncer:
    """Flip the published state only after k consecutive opposite frames."""

    def __init__(self, window: int = DEFAULT_DEBOUNCE_FRAMES, initial: str = ATTENTIVE):
        if window < 1:
            raise ValueError("debounce window must be at least 1")
        self.window = window
        self.state = initial
        self._run_state: str | None = None
        self._run_start: float | None = None
        self._run_length = 0

    def feed(self, t: float, raw: str) -> StateChange | None:
        if raw == self.state:
            self._run_state = None
            self._run_length = 0
            return None
        if raw != self._run_state:
            self._run_state = raw
            self._run_start = t
            self._run_length = 0
        self._run_length += 1
        if self._run_length >= self.window:
            self.state = raw
            change = StateChange(self._run_start, raw)
            self._run_state = None
            self._run_length = 0
            return change
        return None


def debounce(samples: Iterable[tuple[float, str]], window: int = DEFAULT_DEBOUNCE_FRAMES,
             initial: str = ATTENTIVE) -> list[StateChange]:
    """Batch form of the Debouncer over (t, raw_state) samples."""
    debouncer = Debouncer(window, initial)
    changes = []
    for t, raw in samples:
        change = debouncer.feed(t, raw)
        if change is not None:
            changes.append(change)
    return changes


def detect_changes(
    frames: Iterable[LandmarkFrame],
    profile: CalibrationProfile,
    camera: CameraModel | None = None,
    model: FaceModel3D | None = None,
    window: int = DEFAULT_DEBOUNCE_FRAMES,
) -> Iterator[StateChange]:
    """Full sensing pipeline: landmarks -> pose -> judgment -> debounce."""
    model = model or FaceModel3D()
    debouncer = Debouncer(window)
    for frame in frames:
        pose = solve_head_pose(frame, camera, model)
        change = debouncer.feed(frame.t, judge(pose, profile))
        if change is not None:
            yield change
