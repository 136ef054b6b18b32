"""Per-user on-screen angular range, swept while tracking an edge target."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from ..errors import DecodeError, DegenerateCalibration
from .geometry import HeadPose


@dataclass(frozen=True)
class CalibrationProfile:
    yaw_min: float
    yaw_max: float
    pitch_min: float
    pitch_max: float
    captured_at: float = 0.0

    def __post_init__(self):
        if not self.yaw_min < self.yaw_max:
            raise ValueError("yaw_min must be below yaw_max")
        if not self.pitch_min < self.pitch_max:
            raise ValueError("pitch_min must be below pitch_max")

    def to_record(self) -> dict:
        return {
            "yaw_min": self.yaw_min,
            "yaw_max": self.yaw_max,
            "pitch_min": self.pitch_min,
            "pitch_max": self.pitch_max,
            "captured_at": self.captured_at,
        }

    @classmethod
    def from_record(cls, record: dict) -> "CalibrationProfile":
        try:
            return cls(
                yaw_min=float(record["yaw_min"]),
                yaw_max=float(record["yaw_max"]),
                pitch_min=float(record["pitch_min"]),
                pitch_max=float(record["pitch_max"]),
                captured_at=float(record.get("captured_at", 0.0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DecodeError(f"bad calibration profile: {exc}") from exc


def calibrate(poses: Sequence[HeadPose] | Iterable[HeadPose], captured_at: float = 0.0) -> CalibrationProfile:
    """Componentwise yaw/pitch extremes over a calibration sweep."""
    poses = list(poses)
    if not poses:
        raise DegenerateCalibration("no poses collected")
    yaws = [p.yaw for p in poses]
    pitches = [p.pitch for p in poses]
    yaw_min, yaw_max = min(yaws), max(yaws)
    pitch_min, pitch_max = min(pitches), max(pitches)
    if yaw_min >= yaw_max or pitch_min >= pitch_max:
        raise DegenerateCalibration("no head movement detected on some axis")
    return CalibrationProfile(yaw_min, yaw_max, pitch_min, pitch_max, captured_at)


def save_profile(path: str | Path, profile: CalibrationProfile) -> None:
    Path(path).write_text(json.dumps(profile.to_record(), sort_keys=True, indent=2) + "\n")


def load_profile(path: str | Path) -> CalibrationProfile:
    try:
        record = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DecodeError(exc.msg, offset=exc.pos) from exc
    return CalibrationProfile.from_record(record)
