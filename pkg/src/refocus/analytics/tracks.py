"""Interval tracks: alternating attentive/distracted labelings of a span.

A track covers [start, end] with contiguous, non-overlapping intervals.
Tracks come from two sources with identical structure: experimenter
annotations and detector state changes. The duration-weighted confusion
matrix compares one of each over the same span.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import SpanMismatch
from ..sensor.attention import ATTENTIVE, DISTRACTED

_STATES = (ATTENTIVE, DISTRACTED)


@dataclass(frozen=True)
class Interval:
    start: float
    end: float
    state: str


@dataclass
class IntervalTrack:
    source: str  # "annotation" or "detection"
    intervals: list[Interval]

    def __post_init__(self):
        if not self.intervals:
            raise ValueError("track must cover a non-empty span")
        prev_end = None
        for iv in self.intervals:
            if iv.state not in _STATES:
                raise ValueError(f"unknown state {iv.state!r}")
            if iv.end < iv.start:
                raise ValueError("interval ends before it starts")
            if prev_end is not None and abs(iv.start - prev_end) > 1e-9:
                raise ValueError("intervals must be contiguous")
            prev_end = iv.end

    @property
    def span(self) -> tuple[float, float]:
        return (self.intervals[0].start, self.intervals[-1].end)

    @classmethod
    def from_changes(
        cls,
        source: str,
        span: tuple[float, float],
        changes: Iterable[tuple[float, str]],
        initial: str = ATTENTIVE,
    ) -> "IntervalTrack":
        """Build a track from timestamped state flips inside the span.

        Changes outside the span are clamped to it; the state at the
        span start defaults to `initial` unless an earlier change says
        otherwise.
        """
        t0, t1 = span
        if t1 <= t0:
            raise ValueError("span must have positive length")
        state = initial
        pending: list[tuple[float, str]] = []
        for t, s in sorted(changes, key=lambda c: c[0]):
            if s not in _STATES:
                raise ValueError(f"unknown state {s!r}")
            if t <= t0:
                state = s
            elif t < t1:
                pending.append((t, s))
        intervals = []
        cursor = t0
        for t, s in pending:
            if s == state:
                continue
            if t > cursor:
                intervals.append(Interval(cursor, t, state))
                cursor = t
            state = s
        intervals.append(Interval(cursor, t1, state))
        return cls(source, intervals)

    def state_at(self, t: float) -> str:
        for iv in self.intervals:
            if iv.start <= t < iv.end:
                return iv.state
        return self.intervals[-1].state


def total_distracted_time(track: IntervalTrack) -> float:
    """Summed duration of the distracted intervals, in seconds."""
    return sum(iv.end - iv.start for iv in track.intervals if iv.state == DISTRACTED)


def distraction_count(track: IntervalTrack) -> int:
    """Number of distinct distracted intervals."""
    return sum(1 for iv in track.intervals if iv.state == DISTRACTED and iv.end > iv.start)


@dataclass(frozen=True)
class ConfusionMatrix:
    """Duration-weighted agreement, seconds per cell.

    Cell names read (annotated, detected); distracted is the positive
    class for precision.
    """

    attentive_attentive: float
    attentive_distracted: float
    distracted_attentive: float
    distracted_distracted: float

    @property
    def total(self) -> float:
        return (
            self.attentive_attentive
            + self.attentive_distracted
            + self.distracted_attentive
            + self.distracted_distracted
        )

    @property
    def accuracy(self) -> float:
        return (self.attentive_attentive + self.distracted_distracted) / self.total

    @property
    def precision(self) -> float:
        detected = self.attentive_distracted + self.distracted_distracted
        return self.distracted_distracted / detected if detected > 0 else float("nan")

    @property
    def recall(self) -> float:
        actual = self.distracted_attentive + self.distracted_distracted
        return self.distracted_distracted / actual if actual > 0 else float("nan")

    def to_record(self) -> dict:
        return {
            "attentive_attentive_s": self.attentive_attentive,
            "attentive_distracted_s": self.attentive_distracted,
            "distracted_attentive_s": self.distracted_attentive,
            "distracted_distracted_s": self.distracted_distracted,
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
        }

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(
            self.attentive_attentive + other.attentive_attentive,
            self.attentive_distracted + other.attentive_distracted,
            self.distracted_attentive + other.distracted_attentive,
            self.distracted_distracted + other.distracted_distracted,
        )


def confusion_matrix(annotation: IntervalTrack, detection: IntervalTrack) -> ConfusionMatrix:
    """Overlay two labelings of the same span and weigh agreement by time."""
    a0, a1 = annotation.span
    d0, d1 = detection.span
    if abs(a0 - d0) > 1e-6 or abs(a1 - d1) > 1e-6:
        raise SpanMismatch(f"annotation covers [{a0}, {a1}] but detection covers [{d0}, {d1}]")
    boundaries = sorted(
        {iv.start for iv in annotation.intervals}
        | {iv.end for iv in annotation.intervals}
        | {iv.start for iv in detection.intervals}
        | {iv.end for iv in detection.intervals}
    )
    cells = {(a, d): 0.0 for a in _STATES for d in _STATES}
    for lo, hi in zip(boundaries, boundaries[1:]):
        if hi <= lo:
            continue
        mid = (lo + hi) / 2.0
        cells[(annotation.state_at(mid), detection.state_at(mid))] += hi - lo
    return ConfusionMatrix(
        cells[(ATTENTIVE, ATTENTIVE)],
        cells[(ATTENTIVE, DISTRACTED)],
        cells[(DISTRACTED, ATTENTIVE)],
        cells[(DISTRACTED, DISTRACTED)],
    )
