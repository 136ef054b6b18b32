"""End-to-end desk-scale session.

simulate -> serve (scripted roles over real WebSockets) -> analyze,
running a blinded three-part session at 40x speed, then prints the
report summary and shows that the blinded console saw no condition
fields before the reveal.
"""
import asyncio
import tempfile
from pathlib import Path

from refocus.analytics import build_report, render_text
from refocus.control import ControlServer, ServerConfig, load_script, run_scripted_session
from refocus.events import read_events
from refocus.simulate import BehaviorParams, SimulationConfig, simulate

workdir = Path(tempfile.mkdtemp(prefix="refocus-demo-"))
print(f"working in {workdir}")

sim = simulate(
    SimulationConfig(
        seed=42,
        mode="auto",
        parts=("mindless", "alerting", "control"),
        part_duration=120.0,
        params=BehaviorParams(mean_attentive_s=25.0, mean_distracted_s=10.0),
    ),
    workdir / "sim",
    landmarks=False,
)
print("simulated 3 x 2 min of behavior and detector scripts")

config = ServerConfig(
    mode="auto",
    parts=("mindless", "alerting", "control"),
    part_duration=120.0,
    blinded=True,
    shuffle_parts=True,
    seed=42,
    time_scale=40.0,
    log_dir=workdir,
    session_id="demo",
)
server = ControlServer(config)
run = asyncio.run(run_scripted_session(
    server,
    sensor_script=load_script(sim.sensor_script),
    console_script=load_script(sim.console_script),
))
print(f"session served at 40x speed, log: {run.log_path.name}")

leaks = [
    frame for frame in run.console.pre_reveal_frames()
    if '"mode"' in frame or '"condition"' in frame or '"pattern"' in frame
]
print(f"condition-bearing frames seen by the blinded console pre-reveal: {len(leaks)}")
print(f"console export matches the server log byte-for-byte: "
      f"{run.console.export_log() == run.log_path.read_text()}")

report = build_report(read_events(run.log_path), session_id="demo")
print()
print(render_text(report))
