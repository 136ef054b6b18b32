from .attention import (
    ATTENTIVE,
    DEFAULT_DEBOUNCE_FRAMES,
    DEFAULT_FPS,
    DISTRACTED,
    Debouncer,
    StateChange,
    debounce,
    detect_changes,
    judge,
)
from .calibration import CalibrationProfile, calibrate, load_profile, save_profile
from .geometry import (
    DEFAULT_FACE_POINTS,
    LANDMARK_NAMES,
    CameraModel,
    FaceModel3D,
    HeadPose,
    angles_from_rotation,
    normalized_coords,
    project,
    project_points,
    rotation_from_angles,
)
from .landmarks import LandmarkFrame, read_landmarks, write_landmarks
from .pnp import solve_head_pose

__all__ = [
    "ATTENTIVE",
    "DISTRACTED",
    "DEFAULT_DEBOUNCE_FRAMES",
    "DEFAULT_FPS",
    "DEFAULT_FACE_POINTS",
    "LANDMARK_NAMES",
    "CalibrationProfile",
    "CameraModel",
    "Debouncer",
    "FaceModel3D",
    "HeadPose",
    "LandmarkFrame",
    "StateChange",
    "angles_from_rotation",
    "calibrate",
    "debounce",
    "detect_changes",
    "judge",
    "load_profile",
    "normalized_coords",
    "project",
    "project_points",
    "read_landmarks",
    "rotation_from_angles",
    "save_profile",
    "solve_head_pose",
    "write_landmarks",
]
