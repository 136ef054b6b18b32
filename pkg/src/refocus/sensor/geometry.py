"""Camera model, rigid face model, and the pose parameterization.

Conventions, pinned once and used everywhere:

- Camera frame: right-handed, X right, Y up, Z pointing away from the
  camera into the scene. A visible point has Z > 0.
- Projection: u = cx + f * X/Z, v = cy - f * Y/Z (image v grows down).
- Head frame: origin at the nose tip, X toward the user's right, Y up,
  Z out of the face. The zero pose faces the camera, which is the
  rotation diag(-1, 1, -1) (a half turn about the vertical axis).
- Euler angles are intrinsic yaw-pitch-roll on top of the zero pose:
  positive yaw turns the head toward the user's right, positive pitch
  tilts it up, positive roll tilts the user's right ear down.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import RefocusError

LANDMARK_NAMES = (
    "nose_tip",
    "chin",
    "right_eye_outer",
    "left_eye_outer",
    "right_mouth",
    "left_mouth",
)

# generic rigid 6-point face, millimeters, head frame as above
DEFAULT_FACE_POINTS = np.array(
    [
        [0.0, 0.0, 0.0],  # nose tip
        [0.0, -63.0, -12.0],  # chin
        [43.0, 32.0, -26.0],  # right eye outer corner
        [-43.0, 32.0, -26.0],  # left eye outer corner
        [28.0, -29.0, -24.0],  # right mouth corner
        [-28.0, -29.0, -24.0],  # left mouth corner
    ]
)

# zero pose: the face looks straight at the camera
R_FACING = np.diag([-1.0, 1.0, -1.0])


@dataclass(frozen=True)
class CameraModel:
    focal_length: float
    principal_point: tuple[float, float]

    def __post_init__(self):
        if self.focal_length <= 0:
            raise ValueError("focal length must be positive")

    @classmethod
    def default_for(cls, width: int, height: int) -> "CameraModel":
        """Standard heuristic when intrinsics are unknown."""
        return cls(focal_length=float(width), principal_point=(width / 2.0, height / 2.0))


@dataclass(frozen=True)
class FaceModel3D:
    points: np.ndarray = field(default_factory=lambda: DEFAULT_FACE_POINTS.copy())
    names: tuple[str, ...] = LANDMARK_NAMES

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if pts.shape != (len(self.names), 3):
            raise ValueError("model points must match the landmark set")
        if len(pts) < 4:
            raise ValueError("need at least 4 model points")
        # non-coplanarity: the centered point cloud must span 3 dimensions
        centered = pts - pts.mean(axis=0)
        if np.linalg.matrix_rank(centered, tol=1e-6) < 3:
            raise ValueError("model points are coplanar or degenerate")


@dataclass(frozen=True)
class HeadPose:
    yaw: float  # degrees, + toward the user's right
    pitch: float  # degrees, + up
    roll: float  # degrees
    translation: tuple[float, float, float]  # nose tip in camera frame, mm
    reprojection_error: float  # RMS pixels over the landmark set
    converged: bool = True

    def angles(self) -> tuple[float, float, float]:
        return (self.yaw, self.pitch, self.roll)


def rot_x(a: float) -> np.ndarray:
    c, s = np.cos(a), np.sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(a: float) -> np.ndarray:
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(a: float) -> np.ndarray:
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rotation_from_angles(yaw: float, pitch: float, roll: float) -> np.ndarray:
    """Head-to-camera rotation for yaw/pitch/roll in degrees."""
    y, p, r = np.radians([yaw, pitch, roll])
    return R_FACING @ rot_y(y) @ rot_x(-p) @ rot_z(-r)


def angles_from_rotation(R: np.ndarray) -> tuple[float, float, float]:
    """Inverse of rotation_from_angles; degrees in (-180, 180]."""
    M = R_FACING.T @ R
    yaw = np.degrees(np.arctan2(M[0, 2], M[2, 2]))
    pitch = np.degrees(np.arcsin(np.clip(M[1, 2], -1.0, 1.0)))
    roll = -np.degrees(np.arctan2(M[1, 0], M[1, 1]))
    return (float(yaw), float(pitch), float(roll))


def project_points(
    points: np.ndarray,
    R: np.ndarray,
    t: np.ndarray,
    camera: CameraModel,
) -> np.ndarray:
    """Pinhole projection of model points under a rigid transform."""
    cam = points @ R.T + t
    if np.any(cam[:, 2] <= 0):
        raise RefocusError("point behind camera (z <= 0)")
    cx, cy = camera.principal_point
    u = cx + camera.focal_length * cam[:, 0] / cam[:, 2]
    v = cy - camera.focal_length * cam[:, 1] / cam[:, 2]
    return np.stack([u, v], axis=1)


def project(model: FaceModel3D, pose: HeadPose, camera: CameraModel) -> np.ndarray:
    """Forward model: where the landmarks land for a given pose."""
    vals = (*pose.angles(), *pose.translation)
    if not np.all(np.isfinite(vals)):
        raise ValueError("pose must be finite")
    R = rotation_from_angles(pose.yaw, pose.pitch, pose.roll)
    return project_points(model.points, R, np.asarray(pose.translation, dtype=float), camera)


def normalized_coords(pixels: np.ndarray, camera: CameraModel) -> np.ndarray:
    """Invert the intrinsics: pixel -> (X/Z, Y/Z) ray direction."""
    cx, cy = camera.principal_point
    x = (pixels[:, 0] - cx) / camera.focal_length
    y = -(pixels[:, 1] - cy) / camera.focal_length
    return np.stack([x, y], axis=1)
