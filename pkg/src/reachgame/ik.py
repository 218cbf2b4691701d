"""Analytic two-bone inverse kinematics for the display avatar's arm.

Given a fixed shoulder and the two bone lengths, the solver places the
elbow in the plane spanned by the shoulder-to-target ray and a pole hint,
using the law of cosines. Targets outside the reach annulus clamp to its
boundary along the ray; bone lengths are preserved exactly in every case.
Output is display metadata only and never feeds back into game logic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import Vec3

# Minimum shoulder-to-target distance above the folded-arm limit; keeps
# the law-of-cosines well conditioned when the target sits on the shoulder
# side of the annulus.
_MIN_REACH_EPS = 1e-9

_WORLD_AXES = (Vec3(1.0, 0.0, 0.0), Vec3(0.0, 1.0, 0.0), Vec3(0.0, 0.0, 1.0))


class DegenerateChain(ValueError):
    """Target coincides with the shoulder: the reach direction is undefined."""


@dataclass(frozen=True)
class ArmChain:
    shoulder: Vec3
    l_upper: float
    l_fore: float
    pole_hint: Vec3 = field(default_factory=lambda: Vec3(0.0, -1.0, 0.0))

    def __post_init__(self) -> None:
        if self.l_upper <= 0 or self.l_fore <= 0:
            raise ValueError("bone lengths must be > 0")


@dataclass(frozen=True)
class ArmPose:
    elbow: Vec3
    hand: Vec3
    reached: bool


def solve_arm(chain: ArmChain, target: Vec3) -> ArmPose:
    """Pose the arm toward ``target``; ``reached`` is True iff the target
    lies within the annulus [|l_upper - l_fore|, l_upper + l_fore]."""
    to_target = target - chain.shoulder
    d_raw = to_target.norm()
    if d_raw == 0.0:
        raise DegenerateChain("target coincides with the shoulder")
    ray = to_target.scaled(1.0 / d_raw)

    d_min = abs(chain.l_upper - chain.l_fore) + _MIN_REACH_EPS
    d_max = chain.l_upper + chain.l_fore
    d = min(max(d_raw, d_min), d_max)
    reached = abs(chain.l_upper - chain.l_fore) <= d_raw <= d_max

    # Interior angle at the shoulder between the ray and the upper bone.
    cos_a = (chain.l_upper**2 + d * d - chain.l_fore**2) / (2 * chain.l_upper * d)
    cos_a = min(1.0, max(-1.0, cos_a))
    sin_a = math.sqrt(max(0.0, 1.0 - cos_a * cos_a))

    bend = _bend_direction(ray, chain.pole_hint)
    elbow = chain.shoulder + ray.scaled(chain.l_upper * cos_a) + bend.scaled(
        chain.l_upper * sin_a
    )
    hand = chain.shoulder + ray.scaled(d)
    return ArmPose(elbow=elbow, hand=hand, reached=reached)


def _bend_direction(ray: Vec3, pole_hint: Vec3) -> Vec3:
    """Unit vector orthogonal to the ray, in the ray/pole plane, pointing
    toward the pole side. Falls back to the world axis most orthogonal to
    the ray when the hint is (near-)parallel."""
    perp = pole_hint - ray.scaled(pole_hint.dot(ray))
    n = perp.norm()
    if n < 1e-12:
        axis = min(_WORLD_AXES, key=lambda a: abs(ray.dot(a)))
        perp = axis - ray.scaled(axis.dot(ray))
        n = perp.norm()
    return perp.scaled(1.0 / n)
