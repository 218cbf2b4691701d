"""Reach-and-place rehabilitation game: deterministic engine, synthetic
sensor capture, adaptive difficulty, movement metrics, session storage,
and a realtime session server."""

from .capture import MovementScript, NoiseModel, generate, open_replay
from .difficulty import DdaConfig, DifficultyState, Outcome, dda_update
from .engine import (
    DropRecord,
    EventKind,
    GameEvent,
    GameState,
    Phase,
    engine_step,
    run_stream,
)
from .gesture import GestureConfig, GestureEvent, GestureFsm, gesture_step
from .ik import ArmChain, ArmPose, solve_arm
from .metrics import MetricsAccumulator, SessionMetrics, compute_metrics
from .model import HandState, JointId, SceneConfig, SkeletonFrame, Vec3

__version__ = "0.1.0"

__all__ = [
    "ArmChain",
    "ArmPose",
    "DdaConfig",
    "DifficultyState",
    "DropRecord",
    "EventKind",
    "GameEvent",
    "GameState",
    "GestureConfig",
    "GestureEvent",
    "GestureFsm",
    "HandState",
    "JointId",
    "MetricsAccumulator",
    "MovementScript",
    "NoiseModel",
    "Outcome",
    "Phase",
    "SceneConfig",
    "SessionMetrics",
    "SkeletonFrame",
    "Vec3",
    "compute_metrics",
    "dda_update",
    "engine_step",
    "generate",
    "gesture_step",
    "open_replay",
    "run_stream",
    "solve_arm",
]
