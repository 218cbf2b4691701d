"""Debounced grab/release detection from hand state and ball proximity.

A grab needs n_grab consecutive frames with the hand closed inside the
grab radius of the ball; a release needs n_release consecutive open
frames. Any non-qualifying frame (an unknown hand state included) resets
the current streak, so tracking flicker never triggers phantom events.
Emitted events strictly alternate grab, release, grab, ...
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .model import HandState, Vec3


class GestureEvent(Enum):
    GRAB = "grab"
    RELEASE = "release"


class GripMode(Enum):
    RELEASED = "released"
    HELD = "held"


@dataclass(frozen=True)
class GestureConfig:
    """Debounce lengths: ~100 ms to grab and ~67 ms to release at 30 fps.
    Release is shorter so drops feel responsive."""

    n_grab: int = 3
    n_release: int = 2

    def __post_init__(self) -> None:
        if self.n_grab < 1 or self.n_release < 1:
            raise ValueError("n_grab and n_release must be >= 1")


@dataclass(frozen=True)
class GestureFsm:
    mode: GripMode = GripMode.RELEASED
    streak: int = 0


def gesture_step(
    fsm: GestureFsm,
    cfg: GestureConfig,
    hand_state: HandState,
    hand_pos: Vec3,
    ball_pos: Vec3,
    grab_radius: float,
) -> tuple[GestureFsm, GestureEvent | None]:
    """Advance the FSM by one frame; returns the new state and the emitted
    event, if any. Pure function of its arguments."""
    if grab_radius <= 0:
        raise ValueError("grab_radius must be > 0")
    if fsm.mode is GripMode.RELEASED:
        qualifies = (
            hand_state is HandState.CLOSED
            and hand_pos.distance_to(ball_pos) <= grab_radius
        )
        if not qualifies:
            return GestureFsm(GripMode.RELEASED, 0), None
        streak = fsm.streak + 1
        if streak >= cfg.n_grab:
            return GestureFsm(GripMode.HELD, 0), GestureEvent.GRAB
        return GestureFsm(GripMode.RELEASED, streak), None
    else:
        if hand_state is not HandState.OPEN:
            return GestureFsm(GripMode.HELD, 0), None
        streak = fsm.streak + 1
        if streak >= cfg.n_release:
            return GestureFsm(GripMode.RELEASED, 0), GestureEvent.RELEASE
        return GestureFsm(GripMode.HELD, streak), None
