"""Built-in synthetic player scripts for the simulator.

Each repetition reaches to the ball, closes the hand long enough for the
grab debounce, carries the ball to a release point, opens the hand, and
returns home while the feedback cue plays out. The cadence (3 s per
repetition at nominal 30 fps) leaves comfortable margin around the default
debounce lengths and feedback duration.
"""

from __future__ import annotations

import json

from .capture import MovementScript
from .model import HandState, SceneConfig, Vec3

_REP_MS = 3000
_LIFT_M = 0.15


def _repetition_script(
    scene: SceneConfig, release_xz: tuple[float, float], reps: int, **script_kwargs
) -> MovementScript:
    home = scene.ball_home
    home_above = home + Vec3(0.0, _LIFT_M, 0.0)
    carry_y = home.y + _LIFT_M
    release = Vec3(release_xz[0], carry_y, release_xz[1])
    waypoints: list[tuple[int, Vec3]] = [(0, home_above)]
    schedule: list[tuple[int, HandState]] = []
    for k in range(reps):
        b = k * _REP_MS * 1000
        waypoints += [
            (b + 400_000, home),       # descend onto the ball
            (b + 1_000_000, home),     # dwell while the grab debounces
            (b + 1_600_000, release),  # carry
            (b + 2_200_000, release),  # dwell so the drop lands exactly here
            (b + 2_800_000, home_above),
        ]
        schedule += [
            (b + 500_000, HandState.CLOSED),
            (b + 2_000_000, HandState.OPEN),
        ]
    return MovementScript(
        waypoints=tuple(waypoints), hand_schedule=tuple(schedule), **script_kwargs
    )


def perfect_player(scene: SceneConfig, reps: int = 30, **script_kwargs) -> MovementScript:
    """Releases every repetition exactly over the target center."""
    return _repetition_script(scene, scene.target_center, reps, **script_kwargs)


def always_miss_player(scene: SceneConfig, reps: int = 30, **script_kwargs) -> MovementScript:
    """Releases every repetition over the table corner farthest from the
    target, guaranteeing a miss at any allowed radius."""
    cx, cz = scene.table_center
    ex, ez = scene.table_extent
    tx, tz = scene.target_center
    margin = 0.05
    corner_x = cx - ex + margin if tx >= cx else cx + ex - margin
    corner_z = cz - ez + margin if tz >= cz else cz + ez - margin
    return _repetition_script(scene, (corner_x, corner_z), reps, **script_kwargs)


PLAYERS = {"perfect": perfect_player, "miss": always_miss_player}


def script_from_obj(obj: dict) -> MovementScript:
    """Parse a script file object: waypoints [[t_us, [x,y,z]], ...],
    optional hand_schedule [[t_us, "open"|"closed"], ...], and the
    impairment knobs."""
    if not isinstance(obj, dict):
        raise ValueError("script must be an object")
    unknown = set(obj) - {
        "waypoints", "hand_schedule", "tremor_amplitude", "tremor_frequency", "speed_scale",
    }
    if unknown:
        raise ValueError(f"unknown script key(s): {', '.join(sorted(unknown))}")
    raw_wps = obj.get("waypoints")
    if not isinstance(raw_wps, list) or not raw_wps:
        raise ValueError("script needs a non-empty 'waypoints' array")
    waypoints = []
    for i, entry in enumerate(raw_wps):
        try:
            t, xyz = entry
            waypoints.append((int(t), Vec3(float(xyz[0]), float(xyz[1]), float(xyz[2]))))
        except (TypeError, ValueError, IndexError) as e:
            raise ValueError(f"waypoint {i}: {e}") from None
    raw_sched = obj.get("hand_schedule", [])
    if not isinstance(raw_sched, list):
        raise ValueError("'hand_schedule' must be an array")
    schedule = []
    for i, entry in enumerate(raw_sched):
        try:
            t, name = entry
            schedule.append((int(t), HandState(name)))
        except (TypeError, ValueError, IndexError) as e:
            raise ValueError(f"hand_schedule entry {i}: {e}") from None
    return MovementScript(
        waypoints=tuple(waypoints),
        hand_schedule=tuple(schedule),
        tremor_amplitude=float(obj.get("tremor_amplitude", 0.0)),
        tremor_frequency=float(obj.get("tremor_frequency", 0.0)),
        speed_scale=float(obj.get("speed_scale", 1.0)),
    )


def load_script_file(path) -> MovementScript:
    with open(path, "r", encoding="utf-8") as f:
        try:
            obj = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"invalid JSON: {e.msg}") from None
    return script_from_obj(obj)
