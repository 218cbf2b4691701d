"""Core domain types: vectors, joints, skeleton frames, scene geometry.

All types are immutable values. Construction checks only local sanity
(finite numbers, positive sizes); stream-level rules such as timestamp
ordering and the sensor envelope are enforced by ``validate_frame`` so
that invalid frames can still be represented and rejected explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

# Sensor tracking envelope in meters: joints outside this depth range
# cannot be tracked.
SENSOR_MIN_Z = 0.5
SENSOR_MAX_Z = 5.0


class FrameValidationError(ValueError):
    """A skeleton frame violated a stream or envelope rule."""


class NonMonotonicTimestamp(FrameValidationError):
    pass


class OutOfRangeJoint(FrameValidationError):
    pass


class MissingRequiredJoint(FrameValidationError):
    pass


@dataclass(frozen=True)
class Vec3:
    """A point or offset in meters. Right-handed, y-up, sensor at the
    origin looking along +z."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "z"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"Vec3.{name} must be finite, got {v!r}")

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scaled(self, s: float) -> "Vec3":
        return Vec3(self.x * s, self.y * s, self.z * s)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def distance_to(self, other: "Vec3") -> float:
        return (self - other).norm()

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


class JointId(Enum):
    """Closed set of tracked joints. The right arm drives the game; the
    trunk/head joints exist for display."""

    SHOULDER_RIGHT = "shoulder_right"
    ELBOW_RIGHT = "elbow_right"
    WRIST_RIGHT = "wrist_right"
    HAND_RIGHT = "hand_right"
    SPINE_BASE = "spine_base"
    HEAD = "head"

    @classmethod
    def from_name(cls, name: str) -> "JointId":
        try:
            return cls(name)
        except ValueError:
            raise ValueError(f"unknown joint name {name!r}") from None


class HandState(Enum):
    OPEN = "open"
    CLOSED = "closed"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SkeletonFrame:
    """One timestamped sample of tracked joints plus right-hand open/closed
    state. ``tracked=False`` means the sensor lost the player this frame;
    such frames are passed through so downstream code can react."""

    timestamp_us: int
    joints: dict[JointId, Vec3]
    right_hand_state: HandState
    tracked: bool = True

    def hand(self) -> Vec3:
        return self.joints[JointId.HAND_RIGHT]


@dataclass(frozen=True)
class SceneConfig:
    """Static scene geometry: the table, the ball's home position, the
    target-disc center, and the grab reach."""

    table_height: float = 0.75
    table_center: tuple[float, float] = (0.0, 2.0)
    table_extent: tuple[float, float] = (0.6, 0.4)  # half-sizes in x, z
    ball_radius: float = 0.04
    ball_home: Vec3 = field(default_factory=lambda: Vec3(-0.3, 0.79, 2.0))
    target_center: tuple[float, float] = (0.25, 2.0)
    grab_radius: float = 0.12

    def __post_init__(self) -> None:
        if self.ball_radius <= 0:
            raise ValueError("ball_radius must be > 0")
        if self.grab_radius <= 0:
            raise ValueError("grab_radius must be > 0")
        if self.table_extent[0] <= 0 or self.table_extent[1] <= 0:
            raise ValueError("table_extent half-sizes must be > 0")
        rest_y = self.table_height + self.ball_radius
        if abs(self.ball_home.y - rest_y) > 1e-9:
            raise ValueError(
                f"ball_home.y must equal table_height + ball_radius "
                f"({rest_y}), got {self.ball_home.y}"
            )
        tx, tz = self.target_center
        if not self.contains_xz(tx, tz):
            raise ValueError("target_center must lie within table_extent")

    def contains_xz(self, x: float, z: float) -> bool:
        cx, cz = self.table_center
        ex, ez = self.table_extent
        return abs(x - cx) <= ex and abs(z - cz) <= ez

    def clamp_xz(self, x: float, z: float) -> tuple[float, float]:
        """Clamp a table-plane point to the table rectangle."""
        cx, cz = self.table_center
        ex, ez = self.table_extent
        return (min(max(x, cx - ex), cx + ex), min(max(z, cz - ez), cz + ez))

    def ball_rest_y(self) -> float:
        return self.table_height + self.ball_radius


def validate_frame(frame: SkeletonFrame, prev_timestamp: int | None) -> SkeletonFrame:
    """Check a frame against the stream rules and return it unchanged.

    Raises NonMonotonicTimestamp, MissingRequiredJoint, or OutOfRangeJoint
    naming the violated rule. Pure: never mutates, same inputs always give
    the same outcome.
    """
    if prev_timestamp is not None and frame.timestamp_us < prev_timestamp:
        raise NonMonotonicTimestamp(
            f"timestamp {frame.timestamp_us} earlier than previous {prev_timestamp}"
        )
    if frame.tracked:
        if JointId.HAND_RIGHT not in frame.joints:
            raise MissingRequiredJoint("tracked frame lacks hand_right")
        for joint, pos in frame.joints.items():
            if not (SENSOR_MIN_Z <= pos.z <= SENSOR_MAX_Z):
                raise OutOfRangeJoint(
                    f"{joint.value} at z={pos.z} outside sensor range "
                    f"[{SENSOR_MIN_Z}, {SENSOR_MAX_Z}]"
                )
    return frame
