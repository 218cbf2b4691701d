"""Wire protocol: tagged, text-encoded messages exchanged with clients.

Inbound: skeleton frames, pointer input (the browser stand-in for the
sensor), and session commands. Outbound: state snapshots, game events,
command results, and errors. Every message is one JSON object with a
``type`` tag; event messages reuse the event-log record format exactly,
so a live session's event stream is byte-compatible with offline logs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .capture import frame_from_record, frame_to_record
from .engine import GameEvent, event_from_record, event_to_record
from .model import SkeletonFrame

SESSION_COMMANDS = ("start", "stop", "load", "delete", "list")


class ProtocolError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


@dataclass(frozen=True)
class FrameMsg:
    frame: SkeletonFrame


@dataclass(frozen=True)
class PointerMsg:
    x: float
    z: float
    grab: bool


@dataclass(frozen=True)
class SessionCmdMsg:
    cmd: str
    id: str | None = None
    overrides: dict | None = None


@dataclass(frozen=True)
class StateMsg:
    phase: str
    feedback: str | None
    ball: tuple[float, float, float]
    target: tuple[float, float]
    radius: float
    score: int
    frames_seen: int
    avatar: dict[str, tuple[float, float, float]] = field(default_factory=dict)
    avatar_reached: bool = False


@dataclass(frozen=True)
class EventMsg:
    event: GameEvent


@dataclass(frozen=True)
class CmdResultMsg:
    cmd: str
    ok: bool
    payload: dict | None = None
    error: str | None = None


@dataclass(frozen=True)
class ErrorMsg:
    code: str
    message: str


Message = FrameMsg | PointerMsg | SessionCmdMsg | StateMsg | EventMsg | CmdResultMsg | ErrorMsg


def message_to_obj(msg: Message) -> dict:
    if isinstance(msg, FrameMsg):
        return {"type": "frame", **frame_to_record(msg.frame)}
    if isinstance(msg, PointerMsg):
        return {"type": "pointer_input", "x": msg.x, "z": msg.z, "grab": msg.grab}
    if isinstance(msg, SessionCmdMsg):
        obj: dict = {"type": "session_cmd", "cmd": msg.cmd}
        if msg.id is not None:
            obj["id"] = msg.id
        if msg.overrides is not None:
            obj["overrides"] = msg.overrides
        return obj
    if isinstance(msg, StateMsg):
        return {
            "type": "state",
            "phase": msg.phase,
            "feedback": msg.feedback,
            "ball": list(msg.ball),
            "target": list(msg.target),
            "radius": msg.radius,
            "score": msg.score,
            "frames_seen": msg.frames_seen,
            "avatar": {name: list(p) for name, p in msg.avatar.items()},
            "avatar_reached": msg.avatar_reached,
        }
    if isinstance(msg, EventMsg):
        return event_to_record(msg.event)
    if isinstance(msg, CmdResultMsg):
        obj = {"type": "cmd_result", "cmd": msg.cmd, "ok": msg.ok}
        if msg.payload is not None:
            obj["payload"] = msg.payload
        if msg.error is not None:
            obj["error"] = msg.error
        return obj
    if isinstance(msg, ErrorMsg):
        return {"type": "error", "code": msg.code, "message": msg.message}
    raise TypeError(f"not a protocol message: {msg!r}")


def encode_message(msg: Message) -> str:
    return json.dumps(message_to_obj(msg), separators=(",", ":"))


def _number(obj: dict, key: str) -> float:
    v = obj.get(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ProtocolError("malformed_message", f"{key!r} must be a number")
    return float(v)


def _triple(obj: dict, key: str) -> tuple[float, float, float]:
    v = obj.get(key)
    if not (isinstance(v, list) and len(v) == 3):
        raise ProtocolError("malformed_message", f"{key!r} must be a [x, y, z] array")
    return (float(v[0]), float(v[1]), float(v[2]))


def message_from_obj(obj: dict) -> Message:
    if not isinstance(obj, dict):
        raise ProtocolError("malformed_message", "message must be an object")
    kind = obj.get("type")
    if kind == "frame":
        try:
            frame = frame_from_record({k: v for k, v in obj.items() if k != "type"})
        except ValueError as e:
            raise ProtocolError("malformed_message", f"bad frame: {e}") from None
        return FrameMsg(frame)
    if kind == "pointer_input":
        grab = obj.get("grab")
        if not isinstance(grab, bool):
            raise ProtocolError("malformed_message", "'grab' must be a boolean")
        return PointerMsg(x=_number(obj, "x"), z=_number(obj, "z"), grab=grab)
    if kind == "session_cmd":
        cmd = obj.get("cmd")
        if cmd not in SESSION_COMMANDS:
            raise ProtocolError("malformed_message", f"unknown cmd {cmd!r}")
        sid = obj.get("id")
        if sid is not None and not isinstance(sid, str):
            raise ProtocolError("malformed_message", "'id' must be a string")
        overrides = obj.get("overrides")
        if overrides is not None and not isinstance(overrides, dict):
            raise ProtocolError("malformed_message", "'overrides' must be an object")
        return SessionCmdMsg(cmd=cmd, id=sid, overrides=overrides)
    if kind == "state":
        phase = obj.get("phase")
        if not isinstance(phase, str):
            raise ProtocolError("malformed_message", "'phase' must be a string")
        feedback = obj.get("feedback")
        if feedback is not None and not isinstance(feedback, str):
            raise ProtocolError("malformed_message", "'feedback' must be a string or null")
        avatar_obj = obj.get("avatar", {})
        if not isinstance(avatar_obj, dict):
            raise ProtocolError("malformed_message", "'avatar' must be an object")
        avatar = {}
        for name, p in avatar_obj.items():
            if not (isinstance(p, list) and len(p) == 3):
                raise ProtocolError("malformed_message", f"avatar joint {name!r} malformed")
            avatar[name] = (float(p[0]), float(p[1]), float(p[2]))
        target = obj.get("target")
        if not (isinstance(target, list) and len(target) == 2):
            raise ProtocolError("malformed_message", "'target' must be a [x, z] array")
        return StateMsg(
            phase=phase,
            feedback=feedback,
            ball=_triple(obj, "ball"),
            target=(float(target[0]), float(target[1])),
            radius=_number(obj, "radius"),
            score=int(_number(obj, "score")),
            frames_seen=int(_number(obj, "frames_seen")),
            avatar=avatar,
            avatar_reached=bool(obj.get("avatar_reached", False)),
        )
    if kind == "event":
        try:
            return EventMsg(event_from_record(obj))
        except (KeyError, ValueError) as e:
            raise ProtocolError("malformed_message", f"bad event: {e}") from None
    if kind == "cmd_result":
        ok = obj.get("ok")
        if not isinstance(ok, bool):
            raise ProtocolError("malformed_message", "'ok' must be a boolean")
        cmd = obj.get("cmd")
        if not isinstance(cmd, str):
            raise ProtocolError("malformed_message", "'cmd' must be a string")
        return CmdResultMsg(cmd=cmd, ok=ok, payload=obj.get("payload"), error=obj.get("error"))
    if kind == "error":
        return ErrorMsg(code=str(obj.get("code")), message=str(obj.get("message")))
    raise ProtocolError("unknown_type", f"unknown message type {kind!r}")


def decode_message(text: str) -> Message:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProtocolError("malformed_json", e.msg) from None
    return message_from_obj(obj)
