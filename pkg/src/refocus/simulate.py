"""Synthetic sessions: behavior, detections, landmarks, and event logs.

The generator draws distraction episodes from an alternating renewal
process (exponential attentive/distracted durations, clipped to the
part), derives the experimenter annotation script from them, and builds
a detector track with a controlled precision and recall against the
truth. Landmark streams are synthesized through the same projection
forward model the pose solver is tested against. Everything is a pure
function of the seed, so outputs are byte-identical across runs.
"""
from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .control.fixtures import ScriptAction, write_script
from .events import EventLog, SessionEvent
from .scheduling import Scheduler, SchedulerConfig
from .sensor.attention import ATTENTIVE, DISTRACTED
from .sensor.calibration import CalibrationProfile, save_profile
from .sensor.geometry import CameraModel, FaceModel3D, HeadPose, project
from .sensor.landmarks import LandmarkFrame, write_landmarks

IMAGE_SIZE = (1280, 960)


@dataclass
class BehaviorParams:
    mean_attentive_s: float = 40.0
    mean_distracted_s: float = 15.0
    min_interval_s: float = 2.0
    detector_recall: float = 0.85
    detector_precision: float = 0.6
    landmark_noise_px: float = 0.3
    fps: float = 15.0
    yaw_range: tuple[float, float] = (-24.0, 26.0)
    pitch_range: tuple[float, float] = (-14.0, 12.0)

    @classmethod
    def from_file(cls, path: str | Path) -> "BehaviorParams":
        data = json.loads(Path(path).read_text())
        known = {f: data[f] for f in data if f in cls.__dataclass_fields__}
        params = cls(**known)
        for name in ("yaw_range", "pitch_range"):
            setattr(params, name, tuple(getattr(params, name)))
        return params


@dataclass
class SimulationConfig:
    seed: int = 0
    mode: str = "manual"  # manual: annotation-triggered RCT; auto: detector-triggered
    parts: tuple[str, ...] = ("mindless",)
    part_duration: float = 1200.0
    toggle_period: float = 3.0
    treatment_probability: float = 0.5
    params: BehaviorParams = field(default_factory=BehaviorParams)
    session_id: str = "sim"


def _truth_intervals(rng: random.Random, start: float, end: float,
                     params: BehaviorParams) -> list[tuple[float, float]]:
    """Alternating renewal process of distracted intervals inside a part."""
    intervals = []
    t = start + max(params.min_interval_s, rng.expovariate(1.0 / params.mean_attentive_s))
    while t < end - 2.0 * params.min_interval_s:
        length = max(params.min_interval_s, rng.expovariate(1.0 / params.mean_distracted_s))
        stop = min(t + length, end - params.min_interval_s)
        if stop - t >= params.min_interval_s:
            intervals.append((t, stop))
        t = stop + max(params.min_interval_s, rng.expovariate(1.0 / params.mean_attentive_s))
    return intervals


def _detector_intervals(rng: random.Random, truth: list[tuple[float, float]],
                        start: float, end: float,
                        params: BehaviorParams) -> list[tuple[float, float]]:
    """Detections hitting the requested recall and precision against truth."""
    detections = []
    tp_total = 0.0
    for a, b in truth:
        length = (b - a) * params.detector_recall
        if length <= 0.05:
            continue
        slack = (b - a) - length
        off = rng.uniform(0.0, slack)
        detections.append((a + off, a + off + length))
        tp_total += length
    precision = min(max(params.detector_precision, 1e-6), 1.0)
    fp_needed = tp_total * (1.0 - precision) / precision
    # attentive gaps available for false positives
    gaps = []
    cursor = start
    for a, b in truth:
        if a - cursor > 2.0:
            gaps.append([cursor + 0.5, a - 0.5])
        cursor = b
    if end - cursor > 2.0:
        gaps.append([cursor + 0.5, end - 0.5])
    fp_placed = 0.0
    guard = 0
    while fp_placed < fp_needed - 0.05 and gaps and guard < 10_000:
        guard += 1
        gap = gaps[rng.randrange(len(gaps))]
        room = gap[1] - gap[0]
        if room < 0.5:
            gaps.remove(gap)
            continue
        length = min(rng.expovariate(1.0 / 4.0) + 0.5, room, fp_needed - fp_placed)
        if length < 0.2:
            length = min(0.2, room)
        detections.append((gap[0], gap[0] + length))
        fp_placed += length
        gap[0] += length + 0.5
        if gap[1] - gap[0] < 0.5:
            gaps.remove(gap)
    return sorted(detections)


def _flips(intervals: list[tuple[float, float]]) -> list[tuple[float, str]]:
    flips = []
    for a, b in intervals:
        flips.append((a, DISTRACTED))
        flips.append((b, ATTENTIVE))
    return flips


@dataclass
class PartPlan:
    index: int
    mode: str
    start: float
    end: float
    truth: list[tuple[float, float]]
    detections: list[tuple[float, float]]


def plan_session(config: SimulationConfig) -> list[PartPlan]:
    rng = random.Random(config.seed)
    plans = []
    for index, mode in enumerate(config.parts):
        start = index * config.part_duration
        end = start + config.part_duration
        truth = _truth_intervals(rng, start, end, config.params)
        detections = _detector_intervals(rng, truth, start, end, config.params)
        plans.append(PartPlan(index, mode, start, end, truth, detections))
    return plans


def build_event_log(config: SimulationConfig, plans: list[PartPlan],
                    path: Path) -> EventLog:
    """Synthesize the log a live session over these plans would produce."""
    log = EventLog(path)
    next_episode = 0
    for plan in plans:
        log.append(SessionEvent(plan.start, "mode_set", {"part": plan.index, "mode": plan.mode}))
        log.append(SessionEvent(plan.start, "part_started",
                                {"part": plan.index, "duration": config.part_duration}))
        scheduler = Scheduler(
            SchedulerConfig(
                toggle_period=config.toggle_period,
                treatment_probability=(
                    config.treatment_probability if config.mode == "manual" else 1.0
                ),
                mode=plan.mode,
                rng_seed=config.seed + plan.index,
            ),
            log=log,
            first_episode_id=next_episode,
        )
        timeline = [(t, "annotation", state) for t, state in _flips(plan.truth)]
        timeline += [(t, "detection", state) for t, state in _flips(plan.detections)]
        timeline.sort(key=lambda item: item[0])
        for t, source, state in timeline:
            scheduler.advance(t)
            if source == "annotation":
                mark = "distraction_start" if state == DISTRACTED else "refocus"
                log.append(SessionEvent(t, "annotation", {"mark": mark}, sender="console"))
            else:
                log.append(SessionEvent(t, "detection_change", {"state": state}, sender="sensor"))
            triggered = source == ("annotation" if config.mode == "manual" else "detection")
            if triggered:
                if state == DISTRACTED and scheduler.active_episode is None:
                    scheduler.activate(t)
                elif state == ATTENTIVE and scheduler.active_episode is not None:
                    scheduler.deactivate(t)
        scheduler.advance(plan.end, include_now=False)
        if scheduler.active_episode is not None:
            scheduler.deactivate(plan.end)
        next_episode = scheduler._next_id
    total_end = plans[-1].end if plans else 0.0
    log.append(SessionEvent(total_end, "session_end", {}))
    log.close()
    return log


def _pose(yaw: float, pitch: float, roll: float, z: float) -> HeadPose:
    return HeadPose(yaw=yaw, pitch=pitch, roll=roll, translation=(0.0, 0.0, z),
                    reprojection_error=0.0)


def calibration_frames(config: SimulationConfig, duration: float = 8.0) -> list[LandmarkFrame]:
    """Sweep along the screen-edge rectangle, hitting all four extremes."""
    params = config.params
    rng = np.random.default_rng(config.seed + 101)
    camera = CameraModel.default_for(*IMAGE_SIZE)
    model = FaceModel3D()
    n = int(duration * params.fps)
    y0, y1 = params.yaw_range
    p0, p1 = params.pitch_range
    corners = [(y0, p0), (y1, p0), (y1, p1), (y0, p1), (y0, p0)]
    frames = []
    for k in range(n):
        u = k / max(n - 1, 1) * (len(corners) - 1)
        leg = min(int(u), len(corners) - 2)
        frac = u - leg
        yaw = corners[leg][0] + frac * (corners[leg + 1][0] - corners[leg][0])
        pitch = corners[leg][1] + frac * (corners[leg + 1][1] - corners[leg][1])
        pixels = project(model, _pose(yaw, pitch, 0.0, 600.0), camera)
        pixels = pixels + rng.normal(0.0, params.landmark_noise_px, pixels.shape)
        pixels[:, 0] = np.clip(pixels[:, 0], 0, IMAGE_SIZE[0])
        pixels[:, 1] = np.clip(pixels[:, 1], 0, IMAGE_SIZE[1])
        frames.append(LandmarkFrame(t=k / params.fps, image_size=IMAGE_SIZE, points=pixels))
    return frames


def session_frames(config: SimulationConfig, plans: list[PartPlan]) -> list[LandmarkFrame]:
    """Landmarks for the whole session: in-range poses while attentive,
    out-of-range yaw while distracted."""
    params = config.params
    rng = np.random.default_rng(config.seed + 202)
    camera = CameraModel.default_for(*IMAGE_SIZE)
    model = FaceModel3D()
    y0, y1 = params.yaw_range
    p0, p1 = params.pitch_range
    yc, pc = (y0 + y1) / 2.0, (p0 + p1) / 2.0
    distracted = [iv for plan in plans for iv in plan.truth]
    total = plans[-1].end if plans else 0.0
    n = int(total * params.fps)
    frames = []
    for k in range(n):
        t = k / params.fps
        is_distracted = any(a <= t < b for a, b in distracted)
        if is_distracted:
            side = 1.0 if (int(t) // 7) % 2 == 0 else -1.0
            yaw = (y1 + 12.0) if side > 0 else (y0 - 12.0)
            yaw += rng.normal(0.0, 1.5)
            pitch = pc + rng.normal(0.0, 2.0)
        else:
            yaw = yc + rng.normal(0.0, (y1 - y0) / 8.0)
            pitch = pc + rng.normal(0.0, (p1 - p0) / 8.0)
            yaw = float(np.clip(yaw, y0 + 1.0, y1 - 1.0))
            pitch = float(np.clip(pitch, p0 + 1.0, p1 - 1.0))
        roll = rng.normal(0.0, 2.0)
        z = 600.0 + 30.0 * np.sin(t / 30.0)
        pixels = project(model, _pose(yaw, pitch, roll, z), camera)
        pixels = pixels + rng.normal(0.0, params.landmark_noise_px, pixels.shape)
        pixels[:, 0] = np.clip(pixels[:, 0], 0, IMAGE_SIZE[0])
        pixels[:, 1] = np.clip(pixels[:, 1], 0, IMAGE_SIZE[1])
        frames.append(LandmarkFrame(t=t, image_size=IMAGE_SIZE, points=pixels))
    return frames


@dataclass
class SimulationOutput:
    out_dir: Path
    events: Path
    sensor_script: Path
    console_script: Path
    session_landmarks: Path
    calibration_landmarks: Path
    profile: Path
    truth: Path


def simulate(config: SimulationConfig, out_dir: str | Path,
             landmarks: bool = True) -> SimulationOutput:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    plans = plan_session(config)

    events_path = out / f"session-{config.session_id}.events.jsonl"
    build_event_log(config, plans, events_path)

    sensor_actions = []
    console_actions = []
    for plan in plans:
        for t, state in _flips(plan.detections):
            sensor_actions.append(ScriptAction(t, "attention_state", {"state": state}))
        for t, state in _flips(plan.truth):
            mark = "distraction_start" if state == DISTRACTED else "refocus"
            console_actions.append(ScriptAction(t, "annotation", {"mark": mark}))
    sensor_actions.sort(key=lambda a: a.t)
    console_actions.sort(key=lambda a: a.t)
    sensor_script = out / "sensor.script.jsonl"
    console_script = out / "console.script.jsonl"
    write_script(sensor_script, sensor_actions)
    write_script(console_script, console_actions)

    session_landmarks = out / "session.landmarks.jsonl"
    calibration_landmarks = out / "calibration.landmarks.jsonl"
    if landmarks:
        write_landmarks(calibration_landmarks, calibration_frames(config))
        write_landmarks(session_landmarks, session_frames(config, plans))

    profile_path = out / "profile.json"
    params = config.params
    save_profile(profile_path, CalibrationProfile(
        yaw_min=params.yaw_range[0],
        yaw_max=params.yaw_range[1],
        pitch_min=params.pitch_range[0],
        pitch_max=params.pitch_range[1],
        captured_at=0.0,
    ))

    truth_path = out / "truth.json"
    truth_path.write_text(json.dumps({
        "seed": config.seed,
        "mode": config.mode,
        "parts": list(config.parts),
        "part_duration": config.part_duration,
        "distracted": [[a, b] for plan in plans for a, b in plan.truth],
        "detections": [[a, b] for plan in plans for a, b in plan.detections],
        "params": asdict(params),
    }, sort_keys=True, indent=2) + "\n")

    return SimulationOutput(
        out_dir=out,
        events=events_path,
        sensor_script=sensor_script,
        console_script=console_script,
        session_landmarks=session_landmarks,
        calibration_landmarks=calibration_landmarks,
        profile=profile_path,
        truth=truth_path,
    )
