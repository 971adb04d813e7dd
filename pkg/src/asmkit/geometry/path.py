"""Time-parametrized rigid-body paths (waypoint poses, parameter in [0,1])."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from asmkit.errors import InvalidInputError
from asmkit.geometry.pose import Pose, interpolate_pose


@dataclass
class Path:
    """Ordered waypoint poses of one rigid body with strictly increasing
    normalized times from 0 to 1."""

    waypoints: list
    times: np.ndarray = field(default=None)

    def __post_init__(self):
        if len(self.waypoints) < 2:
            raise InvalidInputError("path needs at least 2 waypoints")
        if self.times is None:
            self.times = np.linspace(0.0, 1.0, len(self.waypoints))
        self.times = np.asarray(self.times, dtype=float)
        if len(self.times) != len(self.waypoints):
            raise InvalidInputError("times/waypoints length mismatch")
        if abs(self.times[0]) > 1e-12 or abs(self.times[-1] - 1.0) > 1e-12:
            raise InvalidInputError("path parameter must span [0, 1]")
        if np.any(np.diff(self.times) <= 0):
            raise InvalidInputError("path parameter must be strictly increasing")

    @staticmethod
    def straight(start: Pose, end: Pose) -> "Path":
        return Path([start, end])

    @property
    def start(self) -> Pose:
        return self.waypoints[0]

    @property
    def end(self) -> Pose:
        return self.waypoints[-1]

    def interpolate(self, t: float) -> Pose:
        t = float(np.clip(t, 0.0, 1.0))
        k = int(np.searchsorted(self.times, t, side="right") - 1)
        k = min(max(k, 0), len(self.waypoints) - 2)
        span = self.times[k + 1] - self.times[k]
        return self.interpolate_segment(k, (t - self.times[k]) / span)

    def interpolate_segment(self, k: int, s: float) -> Pose:
        return interpolate_pose(self.waypoints[k], self.waypoints[k + 1], s)

    def reversed(self) -> "Path":
        return Path(list(reversed(self.waypoints)), 1.0 - self.times[::-1])

    def sample(self, count: int) -> list:
        """`count` poses at evenly spaced parameters, endpoints included."""
        if count < 2:
            raise InvalidInputError("need at least 2 samples")
        return [self.interpolate(t) for t in np.linspace(0.0, 1.0, count)]

    def translation_length(self) -> float:
        pts = np.stack([w.translation for w in self.waypoints])
        return float(np.linalg.norm(np.diff(pts, axis=0), axis=1).sum())

    def transformed(self, pose: Pose) -> "Path":
        return Path([pose @ w for w in self.waypoints], self.times.copy())
