"""Planar rigid transforms (rotation + translation) acting on pixel coordinates."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Generator of in-plane rotations: d/dtheta R(theta) = ROT_GEN @ R(theta).
ROT_GEN = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class Se2Pose:
    """Rigid planar transform p -> R(angle) @ p + translation.

    ``translation`` is in pixels, ``angle`` in radians.  The angle is kept
    as given (unwrapped); wrap only when presenting results.
    """

    translation: np.ndarray
    angle: float

    def __post_init__(self):
        t = np.asarray(self.translation, dtype=float).reshape(2).copy()
        t.setflags(write=False)
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "angle", float(self.angle))

    @staticmethod
    def identity() -> "Se2Pose":
        return Se2Pose(np.zeros(2), 0.0)

    def rotation(self) -> np.ndarray:
        c, s = math.cos(self.angle), math.sin(self.angle)
        return np.array([[c, -s], [s, c]])


def apply(pose: Se2Pose, point) -> np.ndarray:
    """R(angle) @ point + translation."""
    p = np.asarray(point, dtype=float).reshape(2)
    return pose.rotation() @ p + pose.translation


def inverse(pose: Se2Pose) -> Se2Pose:
    c, s = math.cos(pose.angle), math.sin(pose.angle)
    rt = np.array([[c, s], [-s, c]])
    return Se2Pose(-(rt @ pose.translation), -pose.angle)


def compose(a: Se2Pose, b: Se2Pose) -> Se2Pose:
    """Pose such that apply(compose(a, b), p) == apply(a, apply(b, p))."""
    return Se2Pose(a.rotation() @ b.translation + a.translation, a.angle + b.angle)
