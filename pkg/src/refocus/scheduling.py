"""Intervention state machine: episodes, cycling, and condition draws.

One episode spans one distraction, from the activation trigger to the
deactivation trigger. Under the mindless mode a treatment episode
cycles its perturbation on and off every toggle_period seconds,
starting enabled; under the alerting mode the alert stays on for the
whole episode (the beep's own period lives in the audio engine);
control-condition episodes never produce an effect.

All methods take caller-supplied monotonic timestamps. The scheduler
never reads a clock, which makes runs reproducible from (seed, inputs).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .audio.effects import ALERT, Effect, Mindless, PerturbationPattern
from .errors import StateError
from .events import EventLog, SessionEvent

MODES = ("mindless", "alerting", "control")
TREATMENT = "treatment"
CONTROL = "control"

_PATTERNS = list(PerturbationPattern)


@dataclass
class SchedulerConfig:
    toggle_period: float = 3.0
    treatment_probability: float = 0.5
    mode: str = "mindless"
    rng_seed: int = 0
    # redraw the pattern at every on-cycle instead of once per episode
    pattern_per_cycle: bool = False

    def __post_init__(self):
        if self.toggle_period <= 0:
            raise ValueError("toggle_period must be positive")
        if not 0.0 <= self.treatment_probability <= 1.0:
            raise ValueError("treatment_probability must lie in [0, 1]")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")


@dataclass
class InterventionEpisode:
    episode_id: int
    activated_at: float
    condition: str
    deactivated_at: float | None = None
    pattern: PerturbationPattern | None = None
    toggle_history: list[tuple[float, bool]] = field(default_factory=list)

    @property
    def active(self) -> bool:
        return self.deactivated_at is None

    @property
    def duration(self) -> float | None:
        if self.deactivated_at is None:
            return None
        return self.deactivated_at - self.activated_at


class Scheduler:
    """Episode lifecycle plus the 3-second enable/disable cycle."""

    def __init__(
        self,
        config: SchedulerConfig | None = None,
        log: EventLog | None = None,
        first_episode_id: int = 0,
    ):
        self.config = config or SchedulerConfig()
        self.log = log
        self.episodes: list[InterventionEpisode] = []
        self._rng = random.Random(self.config.rng_seed)
        self._next_id = first_episode_id
        self._flushed_cycle = 0  # cycles whose toggle events have been emitted

    # -- event plumbing ------------------------------------------------

    def _emit(self, t: float, type_: str, payload: dict) -> SessionEvent:
        event = SessionEvent(t=t, type=type_, payload=payload)
        if self.log is not None:
            self.log.append(event)
        return event

    # -- state queries -------------------------------------------------

    @property
    def active_episode(self) -> InterventionEpisode | None:
        if self.episodes and self.episodes[-1].active:
            return self.episodes[-1]
        return None

    def _cycles(self, episode: InterventionEpisode) -> bool:
        """Whether this episode alternates its effect on a timer."""
        return self.config.mode == "mindless" and episode.condition == TREATMENT

    def _pattern_for_cycle(self, episode: InterventionEpisode, cycle: int) -> PerturbationPattern:
        if not self.config.pattern_per_cycle or cycle == 0:
            return episode.pattern
        # pure function of (seed, episode, cycle) so effect queries stay pure
        mixed = (self.config.rng_seed * 1_000_003 + episode.episode_id) * 1_000_003 + cycle
        return random.Random(mixed).choice(_PATTERNS)

    def current_effect(self, now: float) -> Effect:
        """Effect in force at `now`; pure, safe to call at any rate."""
        episode = self.active_episode
        if episode is None or episode.condition != TREATMENT:
            return None
        if self.config.mode == "alerting":
            return ALERT
        if self.config.mode != "mindless":
            return None
        k = math.floor((now - episode.activated_at) / self.config.toggle_period)
        if k < 0 or k % 2 == 1:
            return None
        return Mindless(self._pattern_for_cycle(episode, k // 2))

    # -- transitions ---------------------------------------------------

    def advance(self, now: float, *, include_now: bool = True) -> None:
        """Emit toggle events for every cycle boundary crossed by `now`.

        Call before logging anything else at `now` so boundary events
        keep the log ordered. Boundary timestamps are exact multiples
        of toggle_period after activation, not the query time.
        """
        episode = self.active_episode
        if episode is None or not self._cycles(episode):
            return
        period = self.config.toggle_period
        elapsed = now - episode.activated_at
        k_now = math.floor(elapsed / period)
        if include_now is False and episode.activated_at + k_now * period >= now:
            k_now -= 1
        while self._flushed_cycle < k_now:
            k = self._flushed_cycle + 1
            t_boundary = episode.activated_at + k * period
            enabled = k % 2 == 0
            episode.toggle_history.append((t_boundary, enabled))
            if enabled:
                pattern = self._pattern_for_cycle(episode, k // 2)
                if self.config.pattern_per_cycle:
                    self._emit(t_boundary, "pattern_selected", {
                        "episode": episode.episode_id,
                        "pattern": pattern.value,
                        "cycle": k // 2,
                    })
                self._emit(t_boundary, "toggle_on", {
                    "episode": episode.episode_id,
                    "pattern": pattern.value,
                })
            else:
                self._emit(t_boundary, "toggle_off", {"episode": episode.episode_id})
            self._flushed_cycle = k

    def activate(self, now: float) -> InterventionEpisode:
        if self.active_episode is not None:
            raise StateError("an episode is already active")
        if self.config.mode == "control":
            condition = CONTROL
        else:
            p = self.config.treatment_probability
            condition = TREATMENT if self._rng.random() < p else CONTROL
        episode = InterventionEpisode(self._next_id, now, condition)
        self._next_id += 1
        if condition == TREATMENT and self.config.mode == "mindless":
            episode.pattern = self._rng.choice(_PATTERNS)
        self.episodes.append(episode)
        self._flushed_cycle = 0
        self._emit(now, "activate", {"episode": episode.episode_id})
        self._emit(now, "condition_assigned", {
            "episode": episode.episode_id,
            "condition": condition,
        })
        if episode.pattern is not None:
            self._emit(now, "pattern_selected", {
                "episode": episode.episode_id,
                "pattern": episode.pattern.value,
                "cycle": 0,
            })
        if condition == TREATMENT and self.config.mode in ("mindless", "alerting"):
            episode.toggle_history.append((now, True))
            payload = {"episode": episode.episode_id}
            if episode.pattern is not None:
                payload["pattern"] = episode.pattern.value
            self._emit(now, "toggle_on", payload)
        return episode

    def deactivate(self, now: float) -> InterventionEpisode:
        episode = self.active_episode
        if episode is None:
            raise StateError("no episode is active")
        if now <= episode.activated_at:
            raise StateError("deactivation must come after activation")
        self.advance(now, include_now=False)
        if episode.toggle_history and episode.toggle_history[-1][1]:
            episode.toggle_history.append((now, False))
            self._emit(now, "toggle_off", {"episode": episode.episode_id})
        episode.deactivated_at = now
        self._emit(now, "deactivate", {"episode": episode.episode_id})
        return episode


def replay(events, config: SchedulerConfig | None = None) -> Scheduler:
    """Rebuild scheduler state from logged events.

    The reconstruction uses only the log, never the RNG, so it works on
    logs produced by any seed. Toggle histories and episode conditions
    come back exactly as they were recorded.
    """
    scheduler = Scheduler(config or SchedulerConfig())
    by_id: dict[int, InterventionEpisode] = {}
    for event in events:
        kind = event.type
        payload = event.payload
        if kind == "activate":
            episode = InterventionEpisode(payload["episode"], event.t, CONTROL)
            by_id[episode.episode_id] = episode
            scheduler.episodes.append(episode)
            scheduler._next_id = max(scheduler._next_id, episode.episode_id + 1)
        elif kind == "condition_assigned":
            by_id[payload["episode"]].condition = payload["condition"]
        elif kind == "pattern_selected":
            if payload.get("cycle", 0) == 0:
                by_id[payload["episode"]].pattern = PerturbationPattern.parse(payload["pattern"])
        elif kind == "toggle_on":
            episode = by_id[payload["episode"]]
            episode.toggle_history.append((event.t, True))
            scheduler._flushed_cycle = max(
                scheduler._flushed_cycle,
                round((event.t - episode.activated_at) / scheduler.config.toggle_period),
            )
        elif kind == "toggle_off":
            episode = by_id[payload["episode"]]
            episode.toggle_history.append((event.t, False))
            if episode.deactivated_at is None:
                scheduler._flushed_cycle = max(
                    scheduler._flushed_cycle,
                    round((event.t - episode.activated_at) / scheduler.config.toggle_period),
                )
        elif kind == "deactivate":
            by_id[payload["episode"]].deactivated_at = event.t
    return scheduler
