"""Facial landmark frames as delivered by an external alignment provider.

Input format: one JSON object per line, `{"t": seconds, "w": px,
"h": px, "points": [[x, y] x 6]}` with points in the fixed order of
LANDMARK_NAMES. Files conventionally end in `.landmarks.jsonl`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from ..errors import DecodeError
from .geometry import LANDMARK_NAMES


@dataclass
class LandmarkFrame:
    t: float
    image_size: tuple[int, int]  # (width, height)
    points: np.ndarray  # (n_landmarks, 2) pixel coordinates

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        if self.points.shape != (len(LANDMARK_NAMES), 2):
            raise ValueError(
                f"expected {len(LANDMARK_NAMES)} (x, y) points in landmark order, got {self.points.shape}"
            )
        w, h = self.image_size
        if np.any(self.points[:, 0] < 0) or np.any(self.points[:, 0] > w) or np.any(
            self.points[:, 1] < 0
        ) or np.any(self.points[:, 1] > h):
            raise ValueError("landmarks fall outside the image bounds")

    def to_record(self) -> dict:
        return {
            "t": self.t,
            "w": self.image_size[0],
            "h": self.image_size[1],
            "points": [[float(x), float(y)] for x, y in self.points],
        }

    @classmethod
    def from_record(cls, record: dict) -> "LandmarkFrame":
        try:
            return cls(
                t=float(record["t"]),
                image_size=(int(record["w"]), int(record["h"])),
                points=np.asarray(record["points"], dtype=float),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DecodeError(f"bad landmark record: {exc}") from exc


def write_landmarks(path: str | Path, frames: Iterable[LandmarkFrame]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for frame in frames:
            fh.write(json.dumps(frame.to_record(), sort_keys=True, separators=(",", ":")) + "\n")


def read_landmarks(path: str | Path) -> Iterator[LandmarkFrame]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DecodeError(f"line {lineno}: {exc.msg}", offset=exc.pos) from exc
            yield LandmarkFrame.from_record(record)
