"""The grab-move-drop task loop.

Each skeleton frame advances one step: grab attaches the ball to the
hand, release drops it straight down onto the table plane, the landing is
scored against the target disc, feedback is shown for a fixed number of
frames, and the disc radius adapts to the outcome. Time is the frame
stream itself; nothing here reads a wall clock, so identical streams give
identical sessions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .difficulty import DdaConfig, DifficultyState, Outcome, dda_update
from .gesture import GestureConfig, GestureEvent, GestureFsm, gesture_step
from .model import JointId, SceneConfig, SkeletonFrame, Vec3

DEFAULT_FEEDBACK_FRAMES = 30  # ~1 s at the nominal 30 fps


class Phase(Enum):
    AWAITING_GRAB = "awaiting_grab"
    HOLDING = "holding"
    FEEDBACK = "feedback"


class FeedbackKind(Enum):
    SUCCESS = "success"
    TRY_AGAIN = "try_again"


class EventKind(Enum):
    GRABBED = "grabbed"
    RELEASED = "released"
    SUCCESS = "success"
    TRY_AGAIN = "try_again"
    RADIUS_CHANGED = "radius_changed"
    TRACKING_LOST = "tracking_lost"
    TRACKING_REGAINED = "tracking_regained"


@dataclass(frozen=True)
class GameEvent:
    kind: EventKind
    timestamp_us: int
    new_radius: float | None = None  # radius_changed only


@dataclass(frozen=True)
class DropRecord:
    release_pos: Vec3
    landing_xz: tuple[float, float]
    radial_error: float
    target_radius_at_drop: float
    hit: bool
    timestamp_us: int


@dataclass(frozen=True)
class GameState:
    phase: Phase
    ball_pos: Vec3
    target_center: tuple[float, float]
    difficulty: DifficultyState
    score: int = 0
    drops: tuple[DropRecord, ...] = ()
    frames_seen: int = 0
    # Plumbing the step function needs besides the public fields above.
    gesture: GestureFsm = field(default_factory=GestureFsm)
    tracking: bool = True
    feedback_kind: FeedbackKind | None = None
    feedback_remaining: int = 0
    feedback_frames: int = DEFAULT_FEEDBACK_FRAMES

    @classmethod
    def new(
        cls,
        scene: SceneConfig,
        dcfg: DdaConfig,
        feedback_frames: int = DEFAULT_FEEDBACK_FRAMES,
    ) -> "GameState":
        return cls(
            phase=Phase.AWAITING_GRAB,
            ball_pos=scene.ball_home,
            target_center=scene.target_center,
            difficulty=DifficultyState.initial(dcfg),
            feedback_frames=feedback_frames,
        )


def hit_test(
    landing_xz: tuple[float, float], target_center: tuple[float, float], radius: float
) -> bool:
    """Boundary-inclusive disc test: ties score in the player's favor."""
    if radius <= 0:
        raise ValueError("radius must be > 0")
    return math.dist(landing_xz, target_center) <= radius


def engine_step(
    state: GameState,
    scene: SceneConfig,
    gcfg: GestureConfig,
    dcfg: DdaConfig,
    frame: SkeletonFrame,
) -> tuple[GameState, list[GameEvent]]:
    """Advance the game by one validated frame; returns the new state and
    the events this step emitted, in order."""
    events: list[GameEvent] = []
    ts = frame.timestamp_us
    state = replace(state, frames_seen=state.frames_seen + 1)

    if frame.tracked != state.tracking:
        kind = EventKind.TRACKING_REGAINED if frame.tracked else EventKind.TRACKING_LOST
        events.append(GameEvent(kind, ts))
        state = replace(state, tracking=frame.tracked)
    if not frame.tracked:
        # Phase progression freezes until tracking returns.
        return state, events

    if state.phase is Phase.FEEDBACK:
        remaining = state.feedback_remaining - 1
        if remaining <= 0:
            state = replace(
                state,
                phase=Phase.AWAITING_GRAB,
                ball_pos=scene.ball_home,
                feedback_kind=None,
                feedback_remaining=0,
                gesture=GestureFsm(),
            )
        else:
            state = replace(state, feedback_remaining=remaining)
        return state, events

    hand = frame.joints[JointId.HAND_RIGHT]
    fsm, gev = gesture_step(
        state.gesture, gcfg, frame.right_hand_state, hand, state.ball_pos, scene.grab_radius
    )
    state = replace(state, gesture=fsm)

    if gev is GestureEvent.GRAB:
        events.append(GameEvent(EventKind.GRABBED, ts))
        state = replace(state, phase=Phase.HOLDING, ball_pos=hand)
    elif gev is GestureEvent.RELEASE:
        state, release_events = _score_release(state, scene, dcfg, hand, ts)
        events.extend(release_events)
    elif state.phase is Phase.HOLDING:
        state = replace(state, ball_pos=hand)

    return state, events


def _score_release(
    state: GameState, scene: SceneConfig, dcfg: DdaConfig, hand: Vec3, ts: int
) -> tuple[GameState, list[GameEvent]]:
    # Vertical drop: the landing is the release point projected onto the
    # table plane, clamped to the table so off-table releases land on the
    # nearest edge (and score as the misses they are).
    landing = scene.clamp_xz(hand.x, hand.z)
    radius = state.difficulty.radius
    error = math.dist(landing, state.target_center)
    hit = error <= radius
    drop = DropRecord(
        release_pos=hand,
        landing_xz=landing,
        radial_error=error,
        target_radius_at_drop=radius,
        hit=hit,
        timestamp_us=ts,
    )
    events = [
        GameEvent(EventKind.RELEASED, ts),
        GameEvent(EventKind.SUCCESS if hit else EventKind.TRY_AGAIN, ts),
    ]
    difficulty = dda_update(state.difficulty, dcfg, Outcome.HIT if hit else Outcome.MISS)
    if difficulty.radius != radius:
        events.append(GameEvent(EventKind.RADIUS_CHANGED, ts, new_radius=difficulty.radius))
    kind = FeedbackKind.SUCCESS if hit else FeedbackKind.TRY_AGAIN
    resting = Vec3(landing[0], scene.ball_rest_y(), landing[1])
    state = replace(
        state,
        drops=state.drops + (drop,),
        score=state.score + (1 if hit else 0),
        difficulty=difficulty,
        ball_pos=resting,
    )
    if state.feedback_frames > 0:
        state = replace(
            state,
            phase=Phase.FEEDBACK,
            feedback_kind=kind,
            feedback_remaining=state.feedback_frames,
        )
    else:
        state = replace(state, phase=Phase.AWAITING_GRAB, ball_pos=scene.ball_home)
    return state, events


def run_stream(
    state: GameState,
    scene: SceneConfig,
    gcfg: GestureConfig,
    dcfg: DdaConfig,
    frames,
) -> tuple[GameState, list[GameEvent]]:
    """Fold engine_step over a frame iterable, collecting all events."""
    events: list[GameEvent] = []
    for frame in frames:
        state, step_events = engine_step(state, scene, gcfg, dcfg, frame)
        events.extend(step_events)
    return state, events


# Event-log records share the line-delimited object style of frame files.

def event_to_record(event: GameEvent) -> dict:
    rec: dict = {"type": "event", "event": event.kind.value, "ts_us": event.timestamp_us}
    if event.new_radius is not None:
        rec["new_radius"] = event.new_radius
    return rec


def event_from_record(obj: dict) -> GameEvent:
    if obj.get("type") != "event":
        raise ValueError("not an event record")
    return GameEvent(
        kind=EventKind(obj["event"]),
        timestamp_us=int(obj["ts_us"]),
        new_radius=obj.get("new_radius"),
    )
