import pytest

from refocus.analytics import extract_episodes, pattern_attribution
from refocus.analytics.report import recovery_time_stats
from refocus.audio.effects import PerturbationPattern
from refocus.errors import InsufficientData, MalformedLog
from refocus.events import EventLog, SessionEvent
from refocus.scheduling import Scheduler, SchedulerConfig


def annotation(t, mark):
    return SessionEvent(t, "annotation", {"mark": mark}, sender="console")


def test_basic_pairing_and_recovery_time():
    events = [annotation(10.0, "distraction_start"), annotation(27.71, "refocus")]
    episodes = extract_episodes(events)
    assert len(episodes) == 1
    assert episodes[0].recovery_time == pytest.approx(17.71)


def test_double_start_is_malformed():
    events = [annotation(10.0, "distraction_start"), annotation(15.0, "distraction_start")]
    with pytest.raises(MalformedLog) as err:
        extract_episodes(events)
    assert "15.0" in str(err.value)


def test_unmatched_final_start_yields_open_episode():
    events = [annotation(10.0, "distraction_start"), annotation(20.0, "refocus"),
              annotation(500.0, "distraction_start")]
    episodes = extract_episodes(events)
    assert [e.open for e in episodes] == [False, True]


def test_last_pattern_before_refocus():
    events = [
        annotation(10.0, "distraction_start"),
        SessionEvent(10.0, "toggle_on", {"episode": 0, "pattern": "volume_halve"}),
        SessionEvent(13.0, "toggle_off", {"episode": 0}),
        SessionEvent(16.0, "toggle_on", {"episode": 0, "pattern": "pitch_up"}),
        annotation(18.0, "refocus"),
    ]
    episodes = extract_episodes(events)
    assert episodes[0].last_pattern is PerturbationPattern.PITCH_UP
    assert episodes[0].pattern_counts[PerturbationPattern.VOLUME_HALVE] == 1
    assert episodes[0].pattern_counts[PerturbationPattern.PITCH_UP] == 1


def test_interleaved_foreign_events_are_ignored():
    events = [
        SessionEvent(5.0, "attention_state", {"state": "distracted"}, sender="sensor"),
        annotation(10.0, "distraction_start"),
        SessionEvent(12.0, "attention_state", {"state": "attentive"}, sender="sensor"),
        annotation(20.0, "refocus"),
    ]
    episodes = extract_episodes(events)
    assert len(episodes) == 1 and episodes[0].recovery_time == pytest.approx(10.0)
    # idempotent: extracting again gives the same result
    assert len(extract_episodes(events)) == 1


def test_condition_binding_from_scheduler_events():
    log = EventLog()
    scheduler = Scheduler(SchedulerConfig(treatment_probability=1.0, rng_seed=4), log=log)
    log.append(annotation(10.0, "distraction_start"))
    scheduler.activate(10.0)
    scheduler.advance(24.0)
    scheduler.deactivate(25.0)
    log.append(annotation(25.0, "refocus"))
    episodes = extract_episodes(log.events)
    assert episodes[0].condition == "treatment"
    assert episodes[0].last_pattern is not None


def test_pattern_attribution_reproduces_reported_statistics():
    # counts shaped like the published 2 x 4 table
    last = {"volume_halve": 19, "volume_double": 7, "pitch_down": 14, "pitch_up": 16}
    totals = {"volume_halve": 50, "volume_double": 47, "pitch_down": 50, "pitch_up": 55}
    events = []
    t = 0.0
    episode_id = 0
    for name in last:
        pattern_payload = {"pattern": name}
        for _ in range(last[name]):
            # a closed episode whose final on-cycle used this pattern
            events.append(annotation(t, "distraction_start"))
            events.append(SessionEvent(t, "toggle_on", {"episode": episode_id, **pattern_payload}))
            events.append(annotation(t + 1.0, "refocus"))
            t += 2.0
            episode_id += 1
    # spread the remaining total occurrences across extra cycles of the
    # first episode of each pattern kind (episode attribution only cares
    # about counts, not placement)
    filler = []
    for name in last:
        extra = totals[name] - last[name]
        filler.extend([name] * extra)
    events.append(annotation(t, "distraction_start"))
    for name in filler:
        events.append(SessionEvent(t, "toggle_on", {"episode": episode_id, "pattern": name}))
    events.append(annotation(t + 1.0, "refocus"))
    # the filler episode's own last pattern would distort row 1: neutralize
    # by closing it without counting (drop its last_pattern afterwards)
    episodes = extract_episodes(events)
    episodes[-1].last_pattern = None
    attribution = pattern_attribution(episodes)
    assert attribution.last_counts == last
    assert attribution.total_counts == totals
    assert attribution.test.effect_size == pytest.approx(0.1220, abs=5e-4)
    assert attribution.test.p_value == pytest.approx(0.2794, abs=1e-3)


def test_recovery_stats_group_means_and_direction():
    events = []
    t = 0.0
    plan = [("treatment", 2.5), ("control", 4.5), ("treatment", 3.0),
            ("control", 5.0), ("treatment", 3.5), ("control", 5.5)]
    for episode_id, (condition, length) in enumerate(plan):
        events.append(annotation(t, "distraction_start"))
        events.append(SessionEvent(t, "activate", {"episode": episode_id}))
        events.append(SessionEvent(t, "condition_assigned",
                                   {"episode": episode_id, "condition": condition}))
        events.append(SessionEvent(t + length, "deactivate", {"episode": episode_id}))
        events.append(annotation(t + length, "refocus"))
        t += length + 10.0
    stats = recovery_time_stats(extract_episodes(events))
    assert stats["groups"]["treatment"]["mean_s"] == pytest.approx(3.0)
    assert stats["groups"]["control"]["mean_s"] == pytest.approx(5.0)
    assert stats["test"]["effect_size"] > 0  # control minus treatment


def test_recovery_stats_require_both_groups():
    events = [annotation(0.0, "distraction_start"), annotation(5.0, "refocus")]
    with pytest.raises(InsufficientData):
        recovery_time_stats(extract_episodes(events))
