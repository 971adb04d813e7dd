"""Rigid transforms in 3-D: unit quaternion + translation.

Quaternions are stored (w, x, y, z). All angles are radians, all lengths
meters. Poses compose with `@` (a @ b applies b first, then a, matching
matrix convention T_a * T_b).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from asmkit.errors import InvalidInputError

_UNIT_TOL = 1e-9


def _quat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ]
    )


def quat_rotate(q: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Rotate vector(s) v (shape (3,) or (n,3)) by unit quaternion q."""
    w = q[0]
    u = q[1:]
    v = np.asarray(v, dtype=float)
    uv = np.cross(u, v)
    return v + 2.0 * w * uv + 2.0 * np.cross(u, uv)


def quat_to_matrix(q: np.ndarray) -> np.ndarray:
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def quat_from_matrix(m: np.ndarray) -> np.ndarray:
    """Shepperd's method; returns a unit quaternion with w >= 0."""
    m = np.asarray(m, dtype=float)
    t = np.trace(m)
    if t > 0:
        s = np.sqrt(t + 1.0) * 2.0
        q = np.array(
            [0.25 * s, (m[2, 1] - m[1, 2]) / s, (m[0, 2] - m[2, 0]) / s, (m[1, 0] - m[0, 1]) / s]
        )
    else:
        i = int(np.argmax(np.diag(m)))
        j, k = (i + 1) % 3, (i + 2) % 3
        s = np.sqrt(m[i, i] - m[j, j] - m[k, k] + 1.0) * 2.0
        q = np.empty(4)
        q[0] = (m[k, j] - m[j, k]) / s
        q[1 + i] = 0.25 * s
        q[1 + j] = (m[j, i] + m[i, j]) / s
        q[1 + k] = (m[k, i] + m[i, k]) / s
    if q[0] < 0:
        q = -q
    return q / np.linalg.norm(q)


def quat_from_axis_angle(axis: np.ndarray, angle: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    if n == 0:
        raise InvalidInputError("rotation axis must be nonzero")
    axis = axis / n
    h = 0.5 * angle
    return np.concatenate([[np.cos(h)], np.sin(h) * axis])


def quat_angle(q: np.ndarray) -> float:
    """Geodesic rotation angle of a unit quaternion, in [0, pi]."""
    return 2.0 * np.arctan2(np.linalg.norm(q[1:]), abs(q[0]))


def rotvec_from_matrix(m: np.ndarray) -> np.ndarray:
    """Axis-angle (rotation vector) of a rotation matrix."""
    q = quat_from_matrix(m)
    s = np.linalg.norm(q[1:])
    if s < 1e-12:
        return np.zeros(3)
    angle = 2.0 * np.arctan2(s, q[0])
    return q[1:] / s * angle


@dataclass(frozen=True)
class Pose:
    """Rigid transform: rotation (unit quaternion) then translation."""

    rotation: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0, 0.0]))
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        q = np.asarray(self.rotation, dtype=float).reshape(4)
        t = np.asarray(self.translation, dtype=float).reshape(3)
        n = np.linalg.norm(q)
        if abs(n - 1.0) > 1e-6:
            raise InvalidInputError(f"quaternion norm {n} too far from 1")
        if abs(n - 1.0) > _UNIT_TOL:
            q = q / n
        object.__setattr__(self, "rotation", q)
        object.__setattr__(self, "translation", t)

    # -- constructors -------------------------------------------------
    @staticmethod
    def identity() -> "Pose":
        return Pose()

    @staticmethod
    def from_translation(t) -> "Pose":
        return Pose(np.array([1.0, 0.0, 0.0, 0.0]), np.asarray(t, dtype=float))

    @staticmethod
    def from_axis_angle(axis, angle: float, translation=(0.0, 0.0, 0.0)) -> "Pose":
        return Pose(quat_from_axis_angle(axis, angle), np.asarray(translation, dtype=float))

    @staticmethod
    def from_matrix(m: np.ndarray) -> "Pose":
        m = np.asarray(m, dtype=float)
        return Pose(quat_from_matrix(m[:3, :3]), m[:3, 3])

    @staticmethod
    def from_rotation_matrix(r: np.ndarray, translation=(0.0, 0.0, 0.0)) -> "Pose":
        return Pose(quat_from_matrix(r), np.asarray(translation, dtype=float))

    # -- algebra ------------------------------------------------------
    def __matmul__(self, other: "Pose") -> "Pose":
        return Pose(
            _quat_mul(self.rotation, other.rotation),
            self.translation + quat_rotate(self.rotation, other.translation),
        )

    def inverse(self) -> "Pose":
        qinv = self.rotation * np.array([1.0, -1.0, -1.0, -1.0])
        return Pose(qinv, -quat_rotate(qinv, self.translation))

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Transform point(s), shape (3,) or (n,3)."""
        return quat_rotate(self.rotation, points) + self.translation

    def rotate(self, vectors: np.ndarray) -> np.ndarray:
        """Rotate vector(s) without translating."""
        return quat_rotate(self.rotation, vectors)

    def matrix(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = quat_to_matrix(self.rotation)
        m[:3, 3] = self.translation
        return m

    def rotation_matrix(self) -> np.ndarray:
        return quat_to_matrix(self.rotation)

    # -- comparisons --------------------------------------------------
    def distance_to(self, other: "Pose") -> tuple[float, float]:
        """(translation distance, rotation geodesic angle) to another pose."""
        dq = _quat_mul(self.rotation * np.array([1.0, -1.0, -1.0, -1.0]), other.rotation)
        return float(np.linalg.norm(self.translation - other.translation)), quat_angle(dq)

    def approx_equal(self, other: "Pose", tol_pos: float = 1e-9, tol_ang: float = 1e-9) -> bool:
        dp, da = self.distance_to(other)
        return dp <= tol_pos and da <= tol_ang

    def rounded_key(self, pos_decimals: int = 7, rot_decimals: int = 7) -> tuple:
        """Stable hashable key for pose-indexed caches."""
        q = self.rotation if self.rotation[0] >= 0 else -self.rotation
        return (
            tuple(np.round(self.translation, pos_decimals)),
            tuple(np.round(q, rot_decimals)),
        )


def interpolate_pose(a: Pose, b: Pose, s: float) -> Pose:
    """Linear position + slerp orientation interpolation, s in [0,1]."""
    qa, qb = a.rotation, b.rotation
    if np.dot(qa, qb) < 0:
        qb = -qb
    dot = float(np.clip(np.dot(qa, qb), -1.0, 1.0))
    if dot > 1.0 - 1e-12:
        q = qa + s * (qb - qa)
        q = q / np.linalg.norm(q)
    else:
        theta = np.arccos(dot)
        q = (np.sin((1 - s) * theta) * qa + np.sin(s * theta) * qb) / np.sin(theta)
    return Pose(q, (1 - s) * a.translation + s * b.translation)
