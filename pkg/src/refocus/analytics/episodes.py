"""Distraction episodes extracted from session logs.

An episode runs from a distraction_start annotation to the next refocus
annotation. When scheduler events are present the episode picks up its
concealed condition and the perturbation pattern in force at the last
toggle_on before the refocus, which is what the pattern attribution
table counts.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from ..audio.effects import PerturbationPattern
from ..errors import MalformedLog
from ..events import SessionEvent
from .stats import TestResult, chi_square_2xk

START_MARK = "distraction_start"
REFOCUS_MARK = "refocus"


@dataclass
class Episode:
    start: float
    end: float | None
    condition: str | None = None
    last_pattern: PerturbationPattern | None = None
    pattern_counts: Counter = None
    part: int | None = None

    def __post_init__(self):
        if self.pattern_counts is None:
            self.pattern_counts = Counter()

    @property
    def open(self) -> bool:
        return self.end is None

    @property
    def recovery_time(self) -> float | None:
        return None if self.end is None else self.end - self.start


def _annotation_mark(event: SessionEvent) -> str | None:
    if event.type == "annotation":
        return event.payload.get("mark")
    return None


def extract_episodes(events: list[SessionEvent]) -> list[Episode]:
    """Pair annotations into episodes and attach scheduler context.

    Raises MalformedLog on two distraction_start marks without a
    refocus between them. An unmatched final start yields an open
    episode, which recovery-time statistics skip.
    """
    episodes: list[Episode] = []
    current: Episode | None = None
    current_part: int | None = None
    # scheduler context keyed by episode id
    conditions: dict[int, str] = {}
    active_scheduler_episode: int | None = None

    for event in events:
        if event.type == "mode_set":
            current_part = event.payload.get("part", current_part)
        elif event.type == "condition_assigned":
            conditions[event.payload["episode"]] = event.payload["condition"]
        elif event.type == "activate":
            active_scheduler_episode = event.payload["episode"]
        elif event.type == "deactivate":
            active_scheduler_episode = None
        elif event.type == "toggle_on" and current is not None:
            name = event.payload.get("pattern")
            if name is not None:
                pattern = PerturbationPattern.parse(name)
                current.last_pattern = pattern
                current.pattern_counts[pattern] += 1

        mark = _annotation_mark(event)
        if mark == START_MARK:
            if current is not None:
                raise MalformedLog(
                    f"distraction_start at t={event.t} while the episode from "
                    f"t={current.start} is still open"
                )
            current = Episode(start=event.t, end=None, part=current_part)
            episodes.append(current)
        elif mark == REFOCUS_MARK:
            if current is None:
                raise MalformedLog(f"refocus at t={event.t} without a distraction_start")
            current.end = event.t
            current = None

        # bind the condition once the scheduler reacts to the annotation
        if current is not None and active_scheduler_episode is not None:
            if current.condition is None and active_scheduler_episode in conditions:
                current.condition = conditions[active_scheduler_episode]

    return episodes


@dataclass(frozen=True)
class PatternAttribution:
    last_counts: dict
    total_counts: dict
    test: TestResult


def pattern_attribution(episodes: list[Episode]) -> PatternAttribution:
    """Last-pattern-before-refocus vs total on-cycle counts per pattern.

    The two count rows form a 2 x 4 contingency table tested with
    Pearson's chi-squared; Cramer's V is the effect size.
    """
    last = Counter()
    totals = Counter()
    for episode in episodes:
        totals.update(episode.pattern_counts)
        if episode.last_pattern is not None and not episode.open:
            last[episode.last_pattern] += 1
    patterns = list(PerturbationPattern)
    table = [
        [last.get(p, 0) for p in patterns],
        [totals.get(p, 0) for p in patterns],
    ]
    test = chi_square_2xk(table)
    return PatternAttribution(
        last_counts={p.value: last.get(p, 0) for p in patterns},
        total_counts={p.value: totals.get(p, 0) for p in patterns},
        test=test,
    )
