"""Session configuration: defaults, JSON (de)serialization, and strict
loading of config files. Unknown keys are rejected everywhere so a typo
never silently falls back to a default.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .capture import NoiseModel
from .difficulty import DdaConfig
from .gesture import GestureConfig
from .model import SceneConfig, Vec3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GameConfigs:
    """The full per-session configuration bundle."""

    scene: SceneConfig = field(default_factory=SceneConfig)
    gesture: GestureConfig = field(default_factory=GestureConfig)
    dda: DdaConfig = field(default_factory=DdaConfig)
    noise: NoiseModel = field(default_factory=NoiseModel)


_SECTIONS = ("scene", "gesture", "dda", "noise")


def _require_number(section: str, key: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}.{key} must be a number")
    return float(value)


def _require_int(section: str, key: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{section}.{key} must be an integer")
    return value


def _require_pair(section: str, key: str, value) -> tuple[float, float]:
    if not (isinstance(value, list) and len(value) == 2):
        raise ConfigError(f"{section}.{key} must be a [a, b] array")
    return (
        _require_number(section, key, value[0]),
        _require_number(section, key, value[1]),
    )


def _check_keys(section: str, obj: dict, allowed: tuple[str, ...]) -> None:
    if not isinstance(obj, dict):
        raise ConfigError(f"section {section!r} must be an object")
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ConfigError(
            f"unknown key(s) in {section!r}: {', '.join(sorted(unknown))}"
        )


def scene_from_obj(obj: dict, base: SceneConfig) -> SceneConfig:
    allowed = (
        "table_height", "table_center", "table_extent", "ball_radius",
        "ball_home", "target_center", "grab_radius",
    )
    _check_keys("scene", obj, allowed)
    kwargs: dict = {}
    if "table_height" in obj:
        kwargs["table_height"] = _require_number("scene", "table_height", obj["table_height"])
    if "table_center" in obj:
        kwargs["table_center"] = _require_pair("scene", "table_center", obj["table_center"])
    if "table_extent" in obj:
        kwargs["table_extent"] = _require_pair("scene", "table_extent", obj["table_extent"])
    if "ball_radius" in obj:
        kwargs["ball_radius"] = _require_number("scene", "ball_radius", obj["ball_radius"])
    if "ball_home" in obj:
        v = obj["ball_home"]
        if not (isinstance(v, list) and len(v) == 3):
            raise ConfigError("scene.ball_home must be a [x, y, z] array")
        kwargs["ball_home"] = Vec3(*(_require_number("scene", "ball_home", c) for c in v))
    if "target_center" in obj:
        kwargs["target_center"] = _require_pair("scene", "target_center", obj["target_center"])
    if "grab_radius" in obj:
        kwargs["grab_radius"] = _require_number("scene", "grab_radius", obj["grab_radius"])
    try:
        return replace(base, **kwargs)
    except ValueError as e:
        raise ConfigError(f"scene: {e}") from None


def scene_to_obj(scene: SceneConfig) -> dict:
    return {
        "table_height": scene.table_height,
        "table_center": list(scene.table_center),
        "table_extent": list(scene.table_extent),
        "ball_radius": scene.ball_radius,
        "ball_home": [scene.ball_home.x, scene.ball_home.y, scene.ball_home.z],
        "target_center": list(scene.target_center),
        "grab_radius": scene.grab_radius,
    }


def gesture_from_obj(obj: dict, base: GestureConfig) -> GestureConfig:
    _check_keys("gesture", obj, ("n_grab", "n_release"))
    kwargs: dict = {}
    if "n_grab" in obj:
        kwargs["n_grab"] = _require_int("gesture", "n_grab", obj["n_grab"])
    if "n_release" in obj:
        kwargs["n_release"] = _require_int("gesture", "n_release", obj["n_release"])
    try:
        return replace(base, **kwargs)
    except ValueError as e:
        raise ConfigError(f"gesture: {e}") from None


def gesture_to_obj(cfg: GestureConfig) -> dict:
    return {"n_grab": cfg.n_grab, "n_release": cfg.n_release}


def dda_from_obj(obj: dict, base: DdaConfig) -> DdaConfig:
    allowed = ("r0", "r_min", "r_max", "alpha", "beta", "s_streak", "f_streak")
    _check_keys("dda", obj, allowed)
    kwargs: dict = {}
    for key in ("r0", "r_min", "r_max", "alpha", "beta"):
        if key in obj:
            kwargs[key] = _require_number("dda", key, obj[key])
    for key in ("s_streak", "f_streak"):
        if key in obj:
            kwargs[key] = _require_int("dda", key, obj[key])
    try:
        return replace(base, **kwargs)
    except ValueError as e:
        raise ConfigError(f"dda: {e}") from None


def dda_to_obj(cfg: DdaConfig) -> dict:
    return {
        "r0": cfg.r0, "r_min": cfg.r_min, "r_max": cfg.r_max,
        "alpha": cfg.alpha, "beta": cfg.beta,
        "s_streak": cfg.s_streak, "f_streak": cfg.f_streak,
    }


def noise_from_obj(obj: dict, base: NoiseModel) -> NoiseModel:
    _check_keys("noise", obj, ("sigma_near", "sigma_far"))
    kwargs: dict = {}
    if "sigma_near" in obj:
        kwargs["sigma_near"] = _require_number("noise", "sigma_near", obj["sigma_near"])
    if "sigma_far" in obj:
        kwargs["sigma_far"] = _require_number("noise", "sigma_far", obj["sigma_far"])
    try:
        return replace(base, **kwargs)
    except ValueError as e:
        raise ConfigError(f"noise: {e}") from None


def noise_to_obj(model: NoiseModel) -> dict:
    return {"sigma_near": model.sigma_near, "sigma_far": model.sigma_far}


def apply_overrides(base: GameConfigs, obj: dict) -> GameConfigs:
    """Apply a partial config object (the config-file/overrides schema)
    over an existing bundle. Strict: unknown sections or keys raise."""
    if not isinstance(obj, dict):
        raise ConfigError("config must be an object")
    unknown = set(obj) - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    out = base
    if "scene" in obj:
        out = replace(out, scene=scene_from_obj(obj["scene"], out.scene))
    if "gesture" in obj:
        out = replace(out, gesture=gesture_from_obj(obj["gesture"], out.gesture))
    if "dda" in obj:
        out = replace(out, dda=dda_from_obj(obj["dda"], out.dda))
    if "noise" in obj:
        out = replace(out, noise=noise_from_obj(obj["noise"], out.noise))
    return out


def load_config_file(path, base: GameConfigs | None = None) -> GameConfigs:
    base = base if base is not None else GameConfigs()
    with open(path, "r", encoding="utf-8") as f:
        try:
            obj = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: invalid JSON: {e.msg}") from None
    return apply_overrides(base, obj)
