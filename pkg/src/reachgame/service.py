"""Long-running session server.

Each client connection owns at most one live session. Inbound skeleton
frames or pointer input drive the engine one step per message; the client
gets every game event plus a state snapshot per step. Session commands
(start/stop/load/delete/list) manage the store. Game time comes from the
message stream, never the wall clock, so a replayed frame file through the
live protocol produces the same event log as an offline replay.

The session logic lives in SessionContext, synchronous and fully testable
without a socket; the FastAPI layer just moves text in and out.
"""

from __future__ import annotations

import asyncio
from collections import deque
from dataclasses import replace

# Module-level so the endpoint's deferred annotation resolves; the heavy
# fastapi import stays inside create_app.
from starlette.websockets import WebSocket, WebSocketDisconnect

from .config import (
    ConfigError,
    GameConfigs,
    apply_overrides,
    dda_to_obj,
    gesture_to_obj,
    scene_to_obj,
)
from .engine import GameEvent, GameState, engine_step
from .ik import ArmChain, solve_arm
from .metrics import metrics_to_obj
from .model import (
    FrameValidationError,
    HandState,
    JointId,
    SceneConfig,
    SkeletonFrame,
    Vec3,
    validate_frame,
)
from .protocol import (
    CmdResultMsg,
    ErrorMsg,
    EventMsg,
    FrameMsg,
    Message,
    PointerMsg,
    ProtocolError,
    SessionCmdMsg,
    StateMsg,
    decode_message,
    encode_message,
)
from . import store as session_store

DEFAULT_BIND = "127.0.0.1:8737"

# Nominal inter-frame gap; assigns timestamps to pointer input.
FRAME_INTERVAL_US = 33333

# Display avatar arm: fixed shoulder behind the table's far edge.
AVATAR_UPPER_M = 0.30
AVATAR_FORE_M = 0.28


def pointer_to_frame(msg: PointerMsg, scene: SceneConfig, ts_us: int) -> SkeletonFrame:
    """Convert pointer input into a synthetic tracked frame: the hand moves
    in the resting ball-center plane at the (table-clamped) pointer
    position, closed iff grabbing. Keeping the hand at ball height makes
    grab proximity a purely planar test for pointer players."""
    x, z = scene.clamp_xz(msg.x, msg.z)
    hand = Vec3(x, scene.ball_rest_y(), z)
    return SkeletonFrame(
        timestamp_us=ts_us,
        joints={JointId.HAND_RIGHT: hand},
        right_hand_state=HandState.CLOSED if msg.grab else HandState.OPEN,
        tracked=True,
    )


def avatar_chain(scene: SceneConfig) -> ArmChain:
    cx, cz = scene.table_center
    _, ez = scene.table_extent
    shoulder = Vec3(cx, scene.table_height + 0.50, cz + ez + 0.05)
    return ArmChain(shoulder=shoulder, l_upper=AVATAR_UPPER_M, l_fore=AVATAR_FORE_M)


def state_message(state: GameState, scene: SceneConfig) -> StateMsg:
    """Snapshot of the live game for clients, avatar arm posed toward the
    ball."""
    pose = solve_arm(avatar_chain(scene), state.ball_pos)
    chain = avatar_chain(scene)
    return StateMsg(
        phase=state.phase.value,
        feedback=state.feedback_kind.value if state.feedback_kind else None,
        ball=state.ball_pos.as_tuple(),
        target=state.target_center,
        radius=state.difficulty.radius,
        score=state.score,
        frames_seen=state.frames_seen,
        avatar={
            "shoulder_right": chain.shoulder.as_tuple(),
            "elbow_right": pose.elbow.as_tuple(),
            "hand_right": pose.hand.as_tuple(),
        },
        avatar_reached=pose.reached,
    )


class SessionContext:
    """One client's session: decodes inbound text, steps the engine, and
    produces the outbound replies. Synchronous; one instance per connection."""

    def __init__(self, store_root, defaults: GameConfigs):
        self.store_root = store_root
        self.defaults = defaults
        self.configs: GameConfigs | None = None
        self.state: GameState | None = None
        self.events: list[GameEvent] = []
        self.last_ts: int | None = None

    @property
    def active(self) -> bool:
        return self.state is not None

    def handle_text(self, text: str) -> list[Message]:
        try:
            msg = decode_message(text)
        except ProtocolError as e:
            return [ErrorMsg(e.code, e.message)]
        if isinstance(msg, FrameMsg):
            return self._on_frame(msg.frame)
        if isinstance(msg, PointerMsg):
            return self._on_pointer(msg)
        if isinstance(msg, SessionCmdMsg):
            return self._on_cmd(msg)
        return [ErrorMsg("unexpected_type", "server-to-client message received")]

    def _step(self, frame: SkeletonFrame) -> list[Message]:
        assert self.state is not None and self.configs is not None
        cfg = self.configs
        self.state, step_events = engine_step(
            self.state, cfg.scene, cfg.gesture, cfg.dda, frame
        )
        self.events.extend(step_events)
        self.last_ts = frame.timestamp_us
        replies: list[Message] = [EventMsg(e) for e in step_events]
        replies.append(state_message(self.state, cfg.scene))
        return replies

    def _on_frame(self, frame: SkeletonFrame) -> list[Message]:
        if not self.active:
            return [ErrorMsg("no_session", "no active session; send session_cmd start")]
        try:
            validate_frame(frame, self.last_ts)
        except FrameValidationError as e:
            return [ErrorMsg("invalid_frame", str(e))]
        return self._step(frame)

    def _on_pointer(self, msg: PointerMsg) -> list[Message]:
        if not self.active:
            return [ErrorMsg("no_session", "no active session; send session_cmd start")]
        assert self.configs is not None
        ts = 0 if self.last_ts is None else self.last_ts + FRAME_INTERVAL_US
        return self._step(pointer_to_frame(msg, self.configs.scene, ts))

    def _on_cmd(self, msg: SessionCmdMsg) -> list[Message]:
        handler = {
            "start": self._cmd_start,
            "stop": self._cmd_stop,
            "load": self._cmd_load,
            "delete": self._cmd_delete,
            "list": self._cmd_list,
        }[msg.cmd]
        return handler(msg)

    def _cmd_start(self, msg: SessionCmdMsg) -> list[Message]:
        if self.active:
            return [CmdResultMsg("start", False, error="session already active; stop it first")]
        try:
            configs = apply_overrides(self.defaults, msg.overrides or {})
        except ConfigError as e:
            return [CmdResultMsg("start", False, error=str(e))]
        self.configs = configs
        self.state = GameState.new(configs.scene, configs.dda)
        self.events = []
        self.last_ts = None
        payload = {
            "scene": scene_to_obj(configs.scene),
            "gesture": gesture_to_obj(configs.gesture),
            "dda": dda_to_obj(configs.dda),
        }
        return [
            CmdResultMsg("start", True, payload=payload),
            state_message(self.state, configs.scene),
        ]

    def _cmd_stop(self, msg: SessionCmdMsg) -> list[Message]:
        if not self.active:
            return [CmdResultMsg("stop", False, error="no active session")]
        assert self.state is not None and self.configs is not None
        record = session_store.new_record(
            scene=self.configs.scene,
            dda=self.configs.dda,
            gesture=self.configs.gesture,
            drops=self.state.drops,
            events=self.events,
        )
        try:
            session_id = session_store.save(self.store_root, record)
        except session_store.StoreError as e:
            return [CmdResultMsg("stop", False, error=str(e))]
        payload = {
            "session_id": session_id,
            "metrics": metrics_to_obj(record.metrics),
            "score": self.state.score,
        }
        self.state = None
        self.configs = None
        self.events = []
        self.last_ts = None
        return [CmdResultMsg("stop", True, payload=payload)]

    def _cmd_load(self, msg: SessionCmdMsg) -> list[Message]:
        if msg.id is None:
            return [CmdResultMsg("load", False, error="missing session id")]
        try:
            record = session_store.load(self.store_root, msg.id)
        except session_store.StoreError as e:
            return [CmdResultMsg("load", False, error=f"{type(e).__name__}: {e}")]
        payload = {
            "session_id": record.session_id,
            "created_at_us": record.created_at_us,
            "metrics": metrics_to_obj(record.metrics),
            "n_events": len(record.events),
            "drops": [session_store.drop_to_record(d) for d in record.drops],
        }
        return [CmdResultMsg("load", True, payload=payload)]

    def _cmd_delete(self, msg: SessionCmdMsg) -> list[Message]:
        if msg.id is None:
            return [CmdResultMsg("delete", False, error="missing session id")]
        try:
            session_store.delete(self.store_root, msg.id)
        except session_store.NotFound:
            return [CmdResultMsg("delete", False, error=f"not found: {msg.id}")]
        return [CmdResultMsg("delete", True, payload={"session_id": msg.id})]

    def _cmd_list(self, msg: SessionCmdMsg) -> list[Message]:
        sessions = [
            {
                "session_id": s.session_id,
                "created_at_us": s.created_at_us,
                "n_drops": s.n_drops,
                "hit_rate": s.hit_rate,
            }
            for s in session_store.list_sessions(self.store_root)
        ]
        return [CmdResultMsg("list", True, payload={"sessions": sessions})]


class OutboundBuffer:
    """Per-connection outbound queue. State snapshots conflate (only the
    latest unsent one is kept, delivered after any pending events); every
    other message kind is delivered in order, never dropped."""

    def __init__(self):
        self._others: deque[str] = deque()
        self._state: str | None = None
        self._wakeup = asyncio.Event()

    def put(self, msg: Message) -> None:
        if isinstance(msg, StateMsg):
            self._state = encode_message(msg)
        else:
            self._others.append(encode_message(msg))
        self._wakeup.set()

    def try_next(self) -> str | None:
        if self._others:
            return self._others.popleft()
        if self._state is not None:
            text, self._state = self._state, None
            return text
        return None

    async def next(self) -> str:
        while True:
            text = self.try_next()
            if text is not None:
                return text
            self._wakeup.clear()
            await self._wakeup.wait()


def create_app(store_root, defaults: GameConfigs | None = None, frontend_dir=None):
    """Build the ASGI app: the /ws protocol endpoint plus, if given, the
    static browser client at /."""
    from fastapi import FastAPI

    defaults = defaults if defaults is not None else GameConfigs()
    app = FastAPI(title="reachgame")

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        ctx = SessionContext(store_root, defaults)
        buffer = OutboundBuffer()

        async def writer():
            while True:
                await ws.send_text(await buffer.next())

        writer_task = asyncio.create_task(writer())
        try:
            while True:
                text = await ws.receive_text()
                for reply in ctx.handle_text(text):
                    buffer.put(reply)
        except WebSocketDisconnect:
            pass
        finally:
            writer_task.cancel()

    if frontend_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")

    return app


def serve(
    bind: str = DEFAULT_BIND,
    store_root="sessions",
    defaults: GameConfigs | None = None,
    frontend_dir=None,
) -> None:
    """Run the server until interrupted."""
    import uvicorn

    host, _, port = bind.partition(":")
    app = create_app(store_root, defaults, frontend_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8737), log_level="info")
