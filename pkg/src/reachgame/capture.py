"""Frame sources: file replay, synthetic movement generation, and the
line-delimited frame record format shared by files and the wire protocol.

The synthetic generator is the stand-in for the depth sensor: it samples a
movement script at a fixed frame rate, adds an optional hand tremor, and
perturbs every joint with zero-mean Gaussian noise whose sigma grows
linearly with distance from the sensor. Streams are reproducible: the
noise is drawn from numpy's PCG64 generator seeded explicitly, so a given
(script, noise, seed, fps) always yields a bit-identical stream.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .model import (
    SENSOR_MAX_Z,
    SENSOR_MIN_Z,
    FrameValidationError,
    HandState,
    JointId,
    SkeletonFrame,
    Vec3,
    validate_frame,
)


class MalformedRecord(ValueError):
    """A frame file line that does not parse as a valid frame record."""

    def __init__(self, line_number: int, reason: str):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number
        self.reason = reason


class EmptyScript(ValueError):
    pass


@dataclass(frozen=True)
class NoiseModel:
    """Per-axis Gaussian position noise, sigma linear in sensor distance.

    ``sigma_near`` applies at 0.5 m, ``sigma_far`` at 5.0 m; outside that
    span sigma is held at the nearer endpoint.
    """

    sigma_near: float = 0.002
    sigma_far: float = 0.040

    def __post_init__(self) -> None:
        if not (0 <= self.sigma_near <= self.sigma_far):
            raise ValueError("need 0 <= sigma_near <= sigma_far")

    @classmethod
    def off(cls) -> "NoiseModel":
        return cls(sigma_near=0.0, sigma_far=0.0)


def noise_sigma(model: NoiseModel, d: float) -> float:
    """Noise sigma in meters at sensor distance ``d`` (meters)."""
    d_clamped = min(max(d, SENSOR_MIN_Z), SENSOR_MAX_Z)
    span = SENSOR_MAX_Z - SENSOR_MIN_Z
    return model.sigma_near + (model.sigma_far - model.sigma_near) * (
        (d_clamped - SENSOR_MIN_Z) / span
    )


@dataclass(frozen=True)
class MovementScript:
    """Timed hand waypoints plus a hand open/close schedule.

    ``waypoints`` are (time_us, position) pairs with strictly increasing
    times; the hand moves on straight segments between them.
    ``hand_schedule`` entries (time_us, state) switch the hand state from
    that time on; before the first entry the hand is open.

    Impairment knobs: ``tremor_amplitude``/``tremor_frequency`` add a
    lateral (x-axis) sinusoid to the hand, and ``speed_scale`` < 1 slows
    every transit, stretching segment durations by 1/speed_scale.
    """

    waypoints: tuple[tuple[int, Vec3], ...]
    hand_schedule: tuple[tuple[int, HandState], ...] = ()
    tremor_amplitude: float = 0.0
    tremor_frequency: float = 0.0
    speed_scale: float = 1.0

    def __post_init__(self) -> None:
        times = [t for t, _ in self.waypoints]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("waypoint timestamps must be strictly increasing")
        if self.tremor_amplitude < 0:
            raise ValueError("tremor_amplitude must be >= 0")
        if not (0 < self.speed_scale <= 1):
            raise ValueError("speed_scale must be in (0, 1]")


# Fixed offsets from the hand used to fill in the rest of the synthetic
# skeleton (straight-ish right arm, trunk behind it). Only hand_right
# drives game logic; these exist so replays carry a complete skeleton.
_SHOULDER_OFFSET = Vec3(-0.12, 0.45, 0.30)
_SPINE_OFFSET = Vec3(-0.30, -0.10, 0.35)
_HEAD_OFFSET = Vec3(-0.30, 0.70, 0.35)

# Deterministic joint order for noise draws.
_JOINT_ORDER = (
    JointId.HAND_RIGHT,
    JointId.WRIST_RIGHT,
    JointId.ELBOW_RIGHT,
    JointId.SHOULDER_RIGHT,
    JointId.SPINE_BASE,
    JointId.HEAD,
)


def _skeleton_from_hand(hand: Vec3) -> dict[JointId, Vec3]:
    shoulder = hand + _SHOULDER_OFFSET
    elbow = hand + _SHOULDER_OFFSET.scaled(0.5) + Vec3(0.0, -0.06, 0.0)
    wrist = hand + (elbow - hand).scaled(0.15)
    return {
        JointId.HAND_RIGHT: hand,
        JointId.WRIST_RIGHT: wrist,
        JointId.ELBOW_RIGHT: elbow,
        JointId.SHOULDER_RIGHT: shoulder,
        JointId.SPINE_BASE: hand + _SPINE_OFFSET,
        JointId.HEAD: hand + _HEAD_OFFSET,
    }


class SyntheticSource:
    """Iterator of frames sampled from a MovementScript. Single-consumer;
    once exhausted it stays exhausted."""

    def __init__(self, script: MovementScript, noise: NoiseModel, seed: int, fps: float):
        if fps <= 0:
            raise ValueError("fps must be > 0")
        if not script.waypoints:
            raise EmptyScript("script has no waypoints")
        self._frames = _generate_frames(script, noise, seed, fps)

    def __iter__(self) -> Iterator[SkeletonFrame]:
        return self

    def __next__(self) -> SkeletonFrame:
        return next(self._frames)


def generate(
    script: MovementScript, noise: NoiseModel, seed: int, fps: float = 30.0
) -> SyntheticSource:
    """Sample ``script`` at 1/fps intervals into a frame stream.

    Deterministic: identical arguments produce bit-identical streams.
    Frames whose noisy joints stray outside the sensor depth range are
    emitted with tracked=False, mirroring a real tracking loss.
    """
    return SyntheticSource(script, noise, seed, fps)


def _generate_frames(
    script: MovementScript, noise: NoiseModel, seed: int, fps: float
) -> Iterator[SkeletonFrame]:
    rng = np.random.Generator(np.random.PCG64(seed))
    stretch = 1.0 / script.speed_scale
    t0 = script.waypoints[0][0]
    # Stretched timeline: transit between waypoints takes nominal/speed_scale.
    way_times = [t0 + (t - t0) * stretch for t, _ in script.waypoints]
    way_pos = [p for _, p in script.waypoints]
    sched = [(t0 + (t - t0) * stretch, s) for t, s in script.hand_schedule]
    total_us = way_times[-1] - t0

    k = 0
    while True:
        rel_us = round(k * 1_000_000 / fps)
        if rel_us > total_us:
            break
        t_us = t0 + rel_us
        hand = _interp(way_times, way_pos, t_us)
        if script.tremor_amplitude > 0 and script.tremor_frequency > 0:
            phase = 2 * math.pi * script.tremor_frequency * (rel_us / 1e6)
            hand = hand + Vec3(script.tremor_amplitude * math.sin(phase), 0.0, 0.0)
        joints = _skeleton_from_hand(hand)
        noisy: dict[JointId, Vec3] = {}
        for joint in _JOINT_ORDER:
            true = joints[joint]
            sigma = noise_sigma(noise, true.norm())
            if sigma > 0:
                dx, dy, dz = rng.normal(0.0, sigma, size=3)
                noisy[joint] = Vec3(true.x + dx, true.y + dy, true.z + dz)
            else:
                noisy[joint] = true
        tracked = all(
            SENSOR_MIN_Z <= p.z <= SENSOR_MAX_Z for p in noisy.values()
        )
        yield SkeletonFrame(
            timestamp_us=int(t_us),
            joints=noisy,
            right_hand_state=_state_at(sched, t_us),
            tracked=tracked,
        )
        k += 1


def _interp(times: list[float], positions: list[Vec3], t: float) -> Vec3:
    if t <= times[0]:
        return positions[0]
    if t >= times[-1]:
        return positions[-1]
    # Linear scan: scripts are short and sampling is monotone.
    for i in range(len(times) - 1):
        if times[i] <= t <= times[i + 1]:
            a, b = positions[i], positions[i + 1]
            u = (t - times[i]) / (times[i + 1] - times[i])
            return a + (b - a).scaled(u)
    return positions[-1]


def _state_at(schedule: list[tuple[float, HandState]], t: float) -> HandState:
    state = HandState.OPEN
    for time, s in schedule:
        if time <= t:
            state = s
        else:
            break
    return state


# ---------------------------------------------------------------------------
# Frame record format: one self-describing JSON object per line, UTF-8,
# no header. This is the interchange contract for files and the protocol.

def frame_to_record(frame: SkeletonFrame) -> dict:
    return {
        "ts_us": frame.timestamp_us,
        "tracked": frame.tracked,
        "hand_state": frame.right_hand_state.value,
        "joints": {
            j.value: [p.x, p.y, p.z] for j, p in frame.joints.items()
        },
    }


def frame_from_record(obj: dict) -> SkeletonFrame:
    """Decode one frame record object. Raises ValueError on any field that
    does not conform (unknown joint or hand state, wrong shapes, NaNs)."""
    if not isinstance(obj, dict):
        raise ValueError("frame record must be an object")
    try:
        ts = obj["ts_us"]
        tracked = obj["tracked"]
        hand_state = obj["hand_state"]
        joints_obj = obj["joints"]
    except KeyError as e:
        raise ValueError(f"missing field {e.args[0]!r}") from None
    if not isinstance(ts, int) or isinstance(ts, bool):
        raise ValueError("ts_us must be an integer")
    if not isinstance(tracked, bool):
        raise ValueError("tracked must be a boolean")
    try:
        state = HandState(hand_state)
    except ValueError:
        raise ValueError(f"unknown hand_state {hand_state!r}") from None
    if not isinstance(joints_obj, dict):
        raise ValueError("joints must be an object")
    joints: dict[JointId, Vec3] = {}
    for name, xyz in joints_obj.items():
        joint = JointId.from_name(name)
        if not (isinstance(xyz, list) and len(xyz) == 3):
            raise ValueError(f"joint {name!r} must be an [x, y, z] array")
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in xyz):
            raise ValueError(f"joint {name!r} has non-numeric components")
        joints[joint] = Vec3(float(xyz[0]), float(xyz[1]), float(xyz[2]))
    return SkeletonFrame(
        timestamp_us=ts, joints=joints, right_hand_state=state, tracked=tracked
    )


def write_frames(path, frames) -> int:
    """Write a frame sequence to a file. Returns the number written."""
    n = 0
    with open(path, "w", encoding="utf-8") as f:
        for frame in frames:
            f.write(json.dumps(frame_to_record(frame), separators=(",", ":")))
            f.write("\n")
            n += 1
    return n


class ReplaySource:
    """Iterator over a frame file; validates every frame against the
    stream rules as it goes. Single-consumer."""

    def __init__(self, path):
        self._file = open(path, "r", encoding="utf-8")
        self._line_no = 0
        self._prev_ts: int | None = None
        self._done = False

    def __iter__(self) -> Iterator[SkeletonFrame]:
        return self

    def __next__(self) -> SkeletonFrame:
        if self._done:
            raise StopIteration
        while True:
            line = self._file.readline()
            self._line_no += 1
            if line == "":
                self._done = True
                self._file.close()
                raise StopIteration
            if line.strip() == "":
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                self._close()
                raise MalformedRecord(self._line_no, f"invalid JSON: {e.msg}") from None
            try:
                frame = frame_from_record(obj)
            except ValueError as e:
                self._close()
                raise MalformedRecord(self._line_no, str(e)) from None
            try:
                validate_frame(frame, self._prev_ts)
            except FrameValidationError as e:
                self._close()
                raise type(e)(f"line {self._line_no}: {e}") from None
            self._prev_ts = frame.timestamp_us
            return frame

    def _close(self) -> None:
        self._done = True
        self._file.close()


def open_replay(path) -> ReplaySource:
    """Open a frame file for replay. Raises FileNotFoundError if the path
    does not exist; malformed lines raise MalformedRecord during iteration
    with their line number."""
    return ReplaySource(path)
