"""Head-pose sensing walkthrough.

Synthesizes landmark frames with the projection forward model, solves
them back, calibrates an on-screen range from an edge sweep, and runs
the debounced off-screen judgment over a head-turn.
"""
import numpy as np

from refocus.sensor import (
    CameraModel,
    Debouncer,
    FaceModel3D,
    HeadPose,
    LandmarkFrame,
    calibrate,
    judge,
    project,
    solve_head_pose,
)

IMAGE = (1280, 960)
camera = CameraModel.default_for(*IMAGE)
model = FaceModel3D()
rng = np.random.default_rng(0)


def synth_frame(yaw, pitch, roll=0.0, z=600.0, noise=0.4):
    truth = HeadPose(yaw, pitch, roll, (0.0, 0.0, z), 0.0)
    pixels = project(model, truth, camera) + rng.normal(0, noise, (6, 2))
    return LandmarkFrame(t=0.0, image_size=IMAGE, points=pixels)


print("solving synthetic poses (0.4 px landmark noise):")
for yaw, pitch in [(0, 0), (25, -10), (-35, 18)]:
    pose = solve_head_pose(synth_frame(yaw, pitch), camera, model)
    print(f"  truth yaw={yaw:+4d} pitch={pitch:+4d}  ->  "
          f"solved yaw={pose.yaw:+6.2f} pitch={pose.pitch:+6.2f} "
          f"(reprojection {pose.reprojection_error:.2f} px)")

print()
print("calibration: sweeping the screen-edge rectangle...")
sweep = []
for k in range(120):
    u = k / 119 * 4.0
    leg = int(min(u, 3.999))
    frac = u - leg
    corners = [(-24, -14), (26, -14), (26, 12), (-24, 12), (-24, -14)]
    yaw = corners[leg][0] + frac * (corners[leg + 1][0] - corners[leg][0])
    pitch = corners[leg][1] + frac * (corners[leg + 1][1] - corners[leg][1])
    sweep.append(solve_head_pose(synth_frame(yaw, pitch), camera, model))
profile = calibrate(sweep)
print(f"  profile: yaw [{profile.yaw_min:+.1f}, {profile.yaw_max:+.1f}], "
      f"pitch [{profile.pitch_min:+.1f}, {profile.pitch_max:+.1f}]")

print()
print("judging a head turn away and back (15 FPS, debounce window 3):")
debouncer = Debouncer(window=3)
timeline = [0.0] * 15 + [40.0] * 15 + [0.0] * 15  # yaw trajectory
for i, yaw in enumerate(timeline):
    t = i / 15.0
    pose = solve_head_pose(synth_frame(yaw, 0.0), camera, model)
    change = debouncer.feed(t, judge(pose, profile))
    if change:
        print(f"  t={change.t:5.2f}s  ->  {change.state}")
print("  (the flip lags the turn by the debounce window, as configured)")
