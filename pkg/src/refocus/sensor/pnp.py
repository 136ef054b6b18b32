"""Head pose from 2D-3D correspondences (a perspective-n-point solve).

The solve runs in two stages:

1. a weak-perspective initialization (pose from orthography and
   scaling, iterated a few times), which is well conditioned for a
   face-sized object at webcam distances where a projective DLT is not;
2. damped Gauss-Newton refinement of the full perspective reprojection
   error over rotation (left-multiplied axis-angle increments) and
   translation, accepting only steps that lower the error.

Refinement stops when the step norm drops below 1e-8 or after 100
iterations. If the final error still looks inconsistent with the
observations, a small grid of canonical restarts is tried; the best
pose is returned, flagged unconverged when it stays bad.
"""
from __future__ import annotations

import numpy as np

from ..errors import DegenerateLandmarks
from .geometry import (
    CameraModel,
    FaceModel3D,
    HeadPose,
    angles_from_rotation,
    normalized_coords,
    rotation_from_angles,
)
from .landmarks import LandmarkFrame

MAX_ITERATIONS = 100
STEP_TOLERANCE = 1e-8

# RMS pixels above which the solution is considered suspect and restarts kick in
_SUSPECT_RMS = 3.0


def _skew(v: np.ndarray) -> np.ndarray:
    return np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])


def _exp_so3(w: np.ndarray) -> np.ndarray:
    theta = np.linalg.norm(w)
    if theta < 1e-12:
        return np.eye(3) + _skew(w)
    k = _skew(w / theta)
    return np.eye(3) + np.sin(theta) * k + (1.0 - np.cos(theta)) * (k @ k)


def _orthonormalize(rows: np.ndarray) -> np.ndarray:
    u, _, vt = np.linalg.svd(rows)
    r = u @ vt
    if np.linalg.det(r) < 0:
        r = u @ np.diag([1.0, 1.0, -1.0]) @ vt
    return r


def _posit_init(points3: np.ndarray, norm2: np.ndarray, iters: int = 12) -> tuple[np.ndarray, np.ndarray]:
    """Pose from orthography and scaling, refined by depth correction."""
    n = len(points3)
    A = np.hstack([points3, np.ones((n, 1))])
    if np.linalg.matrix_rank(A, tol=1e-9) < 4:
        raise DegenerateLandmarks("model points do not span 3D")
    eps = np.zeros(n)
    R = np.eye(3)
    t = np.array([0.0, 0.0, 600.0])
    for _ in range(iters):
        bx = norm2[:, 0] * (1.0 + eps)
        by = norm2[:, 1] * (1.0 + eps)
        sol_x = np.linalg.lstsq(A, bx, rcond=None)[0]
        sol_y = np.linalg.lstsq(A, by, rcond=None)[0]
        i_vec, i0 = sol_x[:3], sol_x[3]
        j_vec, j0 = sol_y[:3], sol_y[3]
        ni, nj = np.linalg.norm(i_vec), np.linalg.norm(j_vec)
        if ni < 1e-12 or nj < 1e-12:
            raise DegenerateLandmarks("landmark configuration carries no pose information")
        scale = np.sqrt(ni * nj)
        r1, r2 = i_vec / ni, j_vec / nj
        R = _orthonormalize(np.stack([r1, r2, np.cross(r1, r2)]))
        t = np.array([i0 / scale, j0 / scale, 1.0 / scale])
        eps = (points3 @ R[2]) / t[2]
    return R, t


def _residual(points3, pixels, camera, R, t):
    cam = points3 @ R.T + t
    z = cam[:, 2]
    cx, cy = camera.principal_point
    f = camera.focal_length
    u = cx + f * cam[:, 0] / z
    v = cy - f * cam[:, 1] / z
    r = np.concatenate([u - pixels[:, 0], v - pixels[:, 1]])
    return r, cam


def _refine(points3, pixels, camera, R, t):
    n = len(points3)
    f = camera.focal_length
    r, cam = _residual(points3, pixels, camera, R, t)
    err = float(r @ r)
    lam = 1e-3
    for _ in range(MAX_ITERATIONS):
        x, y, z = cam[:, 0], cam[:, 1], cam[:, 2]
        du = np.stack([f / z, np.zeros(n), -f * x / z**2], axis=1)
        dv = np.stack([np.zeros(n), -f / z, f * y / z**2], axis=1)
        J = np.zeros((2 * n, 6))
        for i in range(n):
            dp_dw = -_skew(cam[i] - t)  # d(exp(w) R X)/dw at w=0
            J[i, :3] = du[i] @ dp_dw
            J[i, 3:] = du[i]
            J[n + i, :3] = dv[i] @ dp_dw
            J[n + i, 3:] = dv[i]
        g = J.T @ r
        H = J.T @ J
        delta = None
        for _ in range(24):
            try:
                delta = np.linalg.solve(H + lam * np.diag(np.diag(H)) + 1e-12 * np.eye(6), -g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            R_new = _exp_so3(delta[:3]) @ R
            t_new = t + delta[3:]
            if np.any(points3 @ R_new.T[:, 2] + t_new[2] <= 0):
                lam *= 10.0
                continue
            r_new, cam_new = _residual(points3, pixels, camera, R_new, t_new)
            err_new = float(r_new @ r_new)
            if err_new < err:
                R, t, r, cam, err = R_new, t_new, r_new, cam_new, err_new
                lam = max(lam / 3.0, 1e-12)
                break
            lam *= 10.0
        else:
            break
        if delta is not None and np.linalg.norm(delta) < STEP_TOLERANCE:
            break
    rms = float(np.sqrt(err / (2 * n)))
    return R, t, rms


def solve_head_pose(
    frame: LandmarkFrame,
    camera: CameraModel | None = None,
    model: FaceModel3D | None = None,
) -> HeadPose:
    """Recover the head pose that best reprojects onto the landmarks."""
    model = model or FaceModel3D()
    if camera is None:
        camera = CameraModel.default_for(*frame.image_size)
    pixels = frame.points
    spread = pixels.max(axis=0) - pixels.min(axis=0)
    if np.all(spread < 1e-6):
        raise DegenerateLandmarks("all landmarks coincide")
    norm2 = normalized_coords(pixels, camera)

    R, t = _posit_init(model.points, norm2)
    R, t, rms = _refine(model.points, pixels, camera, R, t)

    if rms > _SUSPECT_RMS:
        # restart from a coarse grid of plausible orientations
        best = (R, t, rms)
        for yaw0 in (-30.0, 0.0, 30.0):
            for pitch0 in (-30.0, 0.0, 30.0):
                R0 = rotation_from_angles(yaw0, pitch0, 0.0)
                Ri, ti, ei = _refine(model.points, pixels, camera, R0, t.copy())
                if ei < best[2]:
                    best = (Ri, ti, ei)
        R, t, rms = best

    yaw, pitch, roll = angles_from_rotation(R)
    return HeadPose(
        yaw=yaw,
        pitch=pitch,
        roll=roll,
        translation=(float(t[0]), float(t[1]), float(t[2])),
        reprojection_error=rms,
        converged=rms <= _SUSPECT_RMS,
    )
