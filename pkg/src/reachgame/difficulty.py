"""Adaptive target sizing: shrink the goal disc on success streaks, grow
it back on miss streaks, always clamped to configured bounds.

Steps are multiplicative so the radius is scale-free and can never cross
zero; streak thresholds mean a single stray outcome never moves it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Outcome(Enum):
    HIT = "hit"
    MISS = "miss"


@dataclass(frozen=True)
class DdaConfig:
    r0: float = 0.15          # initial radius, meters
    r_min: float = 0.03
    r_max: float = 0.30
    alpha: float = 0.8        # shrink factor per success streak
    beta: float = 1.25        # growth factor per miss streak
    s_streak: int = 3         # successes required to shrink
    f_streak: int = 3         # misses required to grow

    def __post_init__(self) -> None:
        if not (0 < self.r_min <= self.r0 <= self.r_max):
            raise ValueError("need 0 < r_min <= r0 <= r_max")
        if not (0 < self.alpha < 1 < self.beta):
            raise ValueError("need 0 < alpha < 1 < beta")
        if self.s_streak < 1 or self.f_streak < 1:
            raise ValueError("streak thresholds must be >= 1")


@dataclass(frozen=True)
class DifficultyState:
    radius: float
    success_streak: int = 0
    miss_streak: int = 0

    @classmethod
    def initial(cls, cfg: DdaConfig) -> "DifficultyState":
        return cls(radius=cfg.r0)


def dda_update(state: DifficultyState, cfg: DdaConfig, outcome: Outcome) -> DifficultyState:
    """Fold one drop outcome into the difficulty state."""
    if outcome is Outcome.HIT:
        streak = state.success_streak + 1
        if streak >= cfg.s_streak:
            return DifficultyState(max(cfg.r_min, state.radius * cfg.alpha), 0, 0)
        return DifficultyState(state.radius, streak, 0)
    else:
        streak = state.miss_streak + 1
        if streak >= cfg.f_streak:
            return DifficultyState(min(cfg.r_max, state.radius * cfg.beta), 0, 0)
        return DifficultyState(state.radius, 0, streak)
