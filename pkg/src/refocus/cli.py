"""Command-line entry point.

Subcommands: perturb (offline WAV processing), serve (control server),
sense (landmark replay to a detection track), calibrate (landmarks to a
profile), analyze (session log to a report), simulate (synthetic
session fixtures). Exit codes: 0 success, 1 usage error, 2 data error.
"""
from __future__ import annotations

import argparse
import asyncio
import json
import math
import os
import sys
from pathlib import Path

from .analytics.report import build_report, render_svg_charts, render_text
from .audio.chunks import chunk_stream
from .audio.effects import Mindless, PerturbationPattern
from .audio.engine import AudioEngine
from .audio.pcm import read_wav, write_pcm
from .control.fixtures import load_script, run_scripted_session
from .control.server import ControlServer, ServerConfig
from .errors import RefocusError
from .events import read_events
from .scheduling import SchedulerConfig
from .sensor.attention import detect_changes
from .sensor.calibration import calibrate, load_profile, save_profile
from .sensor.landmarks import read_landmarks
from .sensor.pnp import solve_head_pose
from .simulate import BehaviorParams, SimulationConfig, simulate

LOG_DIR_ENV = "REFOCUS_LOG_DIR"

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _parse_windows(spec: str) -> list[tuple[float, float]]:
    """Parse "a-b,c-d" second windows, rejecting overlaps."""
    windows = []
    for piece in spec.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            lo, hi = piece.split("-")
            window = (float(lo), float(hi))
        except ValueError:
            raise RefocusError(f"bad window {piece!r}, expected start-end seconds")
        if window[1] <= window[0]:
            raise RefocusError(f"window {piece!r} ends before it starts")
        windows.append(window)
    windows.sort()
    for (a0, a1), (b0, b1) in zip(windows, windows[1:]):
        if b0 < a1:
            raise RefocusError(f"active windows {a0}-{a1} and {b0}-{b1} overlap")
    return windows


def cmd_perturb(args) -> int:
    samples, rate = read_wav(args.infile)
    windows = _parse_windows(args.active) if args.active else []
    pattern = PerturbationPattern.parse(args.pattern) if args.pattern else None
    engine = AudioEngine(sample_rate=rate)

    def effect_at(t: float):
        if pattern is None:
            return None
        for lo, hi in windows:
            if lo <= t < hi:
                k = math.floor((t - lo) / args.toggle)
                return Mindless(pattern) if k % 2 == 0 else None
        return None

    out = []
    for chunk in chunk_stream(samples, rate):
        out.append(engine.process(chunk, effect_at(chunk.start_time)))
    write_pcm(args.outfile, out, rate)
    print(f"wrote {args.outfile}")
    return 0


def cmd_serve(args) -> int:
    log_dir = args.log_dir or os.environ.get(LOG_DIR_ENV) or "."
    config = ServerConfig(
        host=args.host,
        port=args.port,
        mode=args.mode,
        parts=tuple(args.parts.split(",")),
        part_duration=args.part_duration,
        seed=args.seed,
        blinded=args.blinded,
        shuffle_parts=args.shuffle_parts,
        time_scale=args.time_scale,
        toggle_period=args.toggle,
        log_dir=Path(log_dir),
        session_id=args.session_id,
        wait_timeout=args.wait_timeout,
    )
    server = ControlServer(config)

    async def _run():
        if args.fixtures:
            fixtures_dir = Path(args.fixtures)
            sensor_script = fixtures_dir / "sensor.script.jsonl"
            console_script = fixtures_dir / "console.script.jsonl"
            run = await run_scripted_session(
                server,
                sensor_script=load_script(sensor_script) if sensor_script.exists() else None,
                console_script=load_script(console_script) if console_script.exists() else None,
                # leave the console role free for a live UI unless scripted
                with_console=console_script.exists(),
            )
            if run.console is not None and args.export:
                Path(args.export).write_text(run.console.export_log())
            return run.log_path
        return await server.run()

    try:
        log_path = asyncio.run(_run())
    except OSError as exc:
        print(f"serve: {exc}", file=sys.stderr)
        return DATA_ERROR
    print(f"session log: {log_path}")
    return 0


def cmd_live(args) -> int:
    from .live import parse_effect, run_live

    frames = run_live(args.url, parse_effect(args.effect), args.rate)
    print(f"processed {frames} frames", file=sys.stderr)
    return 0


def cmd_sense(args) -> int:
    profile_path = Path(args.profile)
    if not profile_path.exists():
        raise RefocusError(
            f"profile {profile_path} not found; run `refocus calibrate` first"
        )
    profile = load_profile(profile_path)
    frames = read_landmarks(args.landmarks)
    with open(args.out, "w", encoding="utf-8") as fh:
        count = 0
        for change in detect_changes(frames, profile, window=args.debounce):
            record = {
                "t": change.t,
                "type": "detection_change",
                "payload": {"state": change.state},
                "sender": "sensor",
                "seq": count,
                "i": count,
            }
            fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")
            count += 1
    print(f"wrote {count} detection changes to {args.out}")
    return 0


def cmd_calibrate(args) -> int:
    frames = list(read_landmarks(args.landmarks))
    poses = [solve_head_pose(frame) for frame in frames]
    profile = calibrate(poses, captured_at=frames[-1].t if frames else 0.0)
    save_profile(args.out, profile)
    print(
        f"profile: yaw [{profile.yaw_min:.1f}, {profile.yaw_max:.1f}] "
        f"pitch [{profile.pitch_min:.1f}, {profile.pitch_max:.1f}] -> {args.out}"
    )
    return 0


def cmd_analyze(args) -> int:
    events = read_events(args.events)
    detections = read_events(args.detections) if args.detections else None
    session_id = Path(args.events).stem.replace(".events", "")
    report = build_report(events, detections, session_id=session_id)
    Path(args.report).write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    print(f"report: {args.report}")
    if args.text:
        print(render_text(report), end="")
    if args.svg_dir:
        svg_dir = Path(args.svg_dir)
        svg_dir.mkdir(parents=True, exist_ok=True)
        for name, svg in render_svg_charts(report).items():
            (svg_dir / f"{name}.svg").write_text(svg)
            print(f"chart: {svg_dir / f'{name}.svg'}")
    return 0


def cmd_simulate(args) -> int:
    params = BehaviorParams.from_file(args.profile) if args.profile else BehaviorParams()
    if args.detector_precision is not None:
        params.detector_precision = args.detector_precision
    if args.detector_recall is not None:
        params.detector_recall = args.detector_recall
    config = SimulationConfig(
        seed=args.seed,
        mode=args.mode,
        parts=tuple(args.parts.split(",")),
        part_duration=args.duration,
        params=params,
        session_id=args.session_id,
    )
    output = simulate(config, args.out, landmarks=not args.no_landmarks)
    print(f"simulation written to {output.out_dir}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="refocus", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("perturb", help="apply a cycled perturbation to a WAV file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", required=True)
    p.add_argument("--pattern", choices=[x.value for x in PerturbationPattern]
                   + [x.value.replace("_", "-") for x in PerturbationPattern])
    p.add_argument("--toggle", type=float, default=3.0)
    p.add_argument("--active", help='active windows, e.g. "0-6,9.5-12" (seconds)')
    p.set_defaults(fn=cmd_perturb)

    p = sub.add_parser("serve", help="run the control server for one session")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=0)
    p.add_argument("--mode", choices=("auto", "manual"), default="auto")
    p.add_argument("--parts", default="mindless,alerting,control")
    p.add_argument("--part-duration", type=float, default=600.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--blinded", action="store_true")
    p.add_argument("--shuffle-parts", action="store_true")
    p.add_argument("--toggle", type=float, default=3.0)
    p.add_argument("--time-scale", type=float, default=1.0,
                   help="run session time faster than wall time")
    p.add_argument("--log-dir", help=f"defaults to ${LOG_DIR_ENV} or the working directory")
    p.add_argument("--session-id", default="session")
    p.add_argument("--wait-timeout", type=float, default=30.0)
    p.add_argument("--fixtures", help="directory of scripted role scripts to run in-process")
    p.add_argument("--export", help="write the scripted console's exported log here")
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("live", help="process raw PCM frames from stdin to stdout")
    p.add_argument("--rate", type=int, default=16_000)
    p.add_argument("--effect", default="none",
                   help="fixed effect: none, alert, or a perturbation pattern")
    p.add_argument("--url", help="follow activation commands from a control server")
    p.set_defaults(fn=cmd_live)

    p = sub.add_parser("sense", help="replay landmarks into a detection track")
    p.add_argument("--landmarks", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--fps", type=float, default=15.0,
                   help="nominal frame rate (informational; frames carry timestamps)")
    p.add_argument("--debounce", type=int, default=3)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_sense)

    p = sub.add_parser("calibrate", help="compute a calibration profile from landmarks")
    p.add_argument("--landmarks", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_calibrate)

    p = sub.add_parser("analyze", help="build the analysis report from a session log")
    p.add_argument("--events", required=True)
    p.add_argument("--detections")
    p.add_argument("--report", required=True)
    p.add_argument("--text", action="store_true", help="print a plain-text summary")
    p.add_argument("--svg-dir", help="write summary bar charts here")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("simulate", help="generate a synthetic session fixture set")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--duration", type=float, default=600.0, help="per-part seconds")
    p.add_argument("--mode", choices=("auto", "manual"), default="manual")
    p.add_argument("--parts", default="mindless")
    p.add_argument("--profile", help="behavior parameter JSON file")
    p.add_argument("--detector-precision", type=float)
    p.add_argument("--detector-recall", type=float)
    p.add_argument("--no-landmarks", action="store_true")
    p.add_argument("--session-id", default="sim")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except RefocusError as exc:
        print(f"refocus {args.command}: {exc}", file=sys.stderr)
        return DATA_ERROR
    except (OSError, ValueError) as exc:
        print(f"refocus {args.command}: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
