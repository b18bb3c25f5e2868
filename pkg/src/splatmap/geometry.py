"""Pinhole camera model and rigid transforms shared by the whole mapper.

Conventions used everywhere in this package:

* Poses are camera-to-world: ``p_world = R @ p_cam + t``.  World-to-camera
  is the inverse, applied explicitly where needed.
* Camera frame is x-right, y-down, z-forward (OpenCV style); image row v
  grows downward, column u rightward, pixel centers at integer coordinates.
* Depth means camera-frame z, not ray length.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Intrinsics:
    """Pinhole intrinsics plus the sensor's usable depth range (meters)."""

    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int
    near: float = 0.3
    far: float = 10.0

    def __post_init__(self):
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("focal lengths must be positive")
        if not 0 < self.near < self.far:
            raise ValueError("need 0 < near < far")
        if self.width < 8 or self.height < 8:
            raise ValueError("image size must be at least 8x8")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.fx, 0.0, self.cx], [0.0, self.fy, self.cy], [0.0, 0.0, 1.0]]
        )


@dataclass(frozen=True)
class Pose:
    """Camera-to-world rigid transform."""

    rotation: np.ndarray  # (3, 3) orthonormal, det +1
    translation: np.ndarray  # (3,)

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=np.float64)
        t = np.asarray(self.translation, dtype=np.float64).reshape(3)
        if r.shape != (3, 3):
            raise ValueError("rotation must be 3x3")
        if not np.allclose(r.T @ r, np.eye(3), atol=1e-9):
            raise ValueError("rotation is not orthonormal")
        if abs(np.linalg.det(r) - 1.0) > 1e-9:
            raise ValueError("rotation determinant must be +1")
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", t)

    @staticmethod
    def identity() -> "Pose":
        return Pose(np.eye(3), np.zeros(3))

    @staticmethod
    def from_quaternion(t: np.ndarray, qxyzw: np.ndarray) -> "Pose":
        """Build from translation + (qx, qy, qz, qw), the trajectory-file layout."""
        qx, qy, qz, qw = np.asarray(qxyzw, dtype=np.float64)
        n = np.sqrt(qx * qx + qy * qy + qz * qz + qw * qw)
        if n == 0:
            raise ValueError("zero quaternion")
        qx, qy, qz, qw = qx / n, qy / n, qz / n, qw / n
        r = np.array(
            [
                [1 - 2 * (qy * qy + qz * qz), 2 * (qx * qy - qw * qz), 2 * (qx * qz + qw * qy)],
                [2 * (qx * qy + qw * qz), 1 - 2 * (qx * qx + qz * qz), 2 * (qy * qz - qw * qx)],
                [2 * (qx * qz - qw * qy), 2 * (qy * qz + qw * qx), 1 - 2 * (qx * qx + qy * qy)],
            ]
        )
        return Pose(r, np.asarray(t, dtype=np.float64))

    def to_quaternion(self) -> np.ndarray:
        """Return (qx, qy, qz, qw) of the rotation, qw >= 0."""
        r = self.rotation
        tr = np.trace(r)
        if tr > 0:
            s = np.sqrt(tr + 1.0) * 2
            qw = 0.25 * s
            qx = (r[2, 1] - r[1, 2]) / s
            qy = (r[0, 2] - r[2, 0]) / s
            qz = (r[1, 0] - r[0, 1]) / s
        else:
            i = int(np.argmax(np.diag(r)))
            j, k = (i + 1) % 3, (i + 2) % 3
            s = np.sqrt(max(1.0 + r[i, i] - r[j, j] - r[k, k], 0.0)) * 2
            q = np.empty(4)
            q[i] = 0.25 * s
            q[j] = (r[j, i] + r[i, j]) / s
            q[k] = (r[k, i] + r[i, k]) / s
            q[3] = (r[k, j] - r[j, k]) / s
            qx, qy, qz, qw = q
        quat = np.array([qx, qy, qz, qw])
        if quat[3] < 0:
            quat = -quat
        return quat

    def inverse(self) -> "Pose":
        return Pose(self.rotation.T, -self.rotation.T @ self.translation)

    def compose(self, other: "Pose") -> "Pose":
        """self ∘ other: apply `other` first, then `self`."""
        return Pose(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )

    def transform(self, points: np.ndarray) -> np.ndarray:
        """Map camera-frame points (..., 3) to world frame."""
        p = np.asarray(points, dtype=np.float64)
        return p @ self.rotation.T + self.translation

    def world_to_camera(self, points: np.ndarray) -> np.ndarray:
        p = np.asarray(points, dtype=np.float64)
        return (p - self.translation) @ self.rotation


def project(point_world: np.ndarray, pose: Pose, K: Intrinsics):
    """Project a world point to continuous pixel coordinates and z depth.

    Returns ((u, v), z) or None when the point is at or behind the near
    plane (z <= near), which also covers points behind the camera.
    """
    p = pose.world_to_camera(np.asarray(point_world, dtype=np.float64))
    z = p[2]
    if not np.isfinite(z) or z <= K.near:
        return None
    u = K.fx * p[0] / z + K.cx
    v = K.fy * p[1] / z + K.cy
    return np.array([u, v]), z


def backproject(pix: np.ndarray, depth: float, pose: Pose, K: Intrinsics) -> np.ndarray:
    """Lift a pixel with z depth back to a world point; inverse of project."""
    if not np.isfinite(depth) or depth <= 0:
        raise ValueError(f"invalid depth {depth!r}")
    u, v = float(pix[0]), float(pix[1])
    p_cam = np.array(
        [(u - K.cx) / K.fx * depth, (v - K.cy) / K.fy * depth, depth]
    )
    return pose.transform(p_cam)


def backproject_grid(depth: np.ndarray, pose: Pose, K: Intrinsics) -> np.ndarray:
    """Backproject a full depth image to an (H, W, 3) world-point grid.

    Invalid pixels (depth <= 0 or non-finite) come out as NaN rows.
    """
    h, w = depth.shape
    us = np.arange(w, dtype=np.float64)
    vs = np.arange(h, dtype=np.float64)
    uu, vv = np.meshgrid(us, vs)
    d = np.asarray(depth, dtype=np.float64)
    valid = np.isfinite(d) & (d > 0)
    d = np.where(valid, d, np.nan)
    x = (uu - K.cx) / K.fx * d
    y = (vv - K.cy) / K.fy * d
    cam = np.stack([x, y, d], axis=-1)
    return cam @ pose.rotation.T + pose.translation


def look_at(eye: np.ndarray, target: np.ndarray, up: np.ndarray = (0.0, 0.0, 1.0)) -> Pose:
    """Camera-to-world pose looking from `eye` toward `target` (y-down camera)."""
    eye = np.asarray(eye, dtype=np.float64)
    f = np.asarray(target, dtype=np.float64) - eye
    nf = np.linalg.norm(f)
    if nf < 1e-12:
        raise ValueError("eye and target coincide")
    f = f / nf
    r = np.cross(f, np.asarray(up, dtype=np.float64))
    nr = np.linalg.norm(r)
    if nr < 1e-9:
        raise ValueError("view direction parallel to up vector")
    r = r / nr
    d = np.cross(f, r)
    return Pose(np.stack([r, d, f], axis=1), eye)
