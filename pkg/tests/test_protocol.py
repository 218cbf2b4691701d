import json
import random

import pytest

from reachgame.engine import EventKind, GameEvent, event_to_record
from reachgame.model import HandState, Vec3
from reachgame.protocol import (
    CmdResultMsg,
    ErrorMsg,
    EventMsg,
    FrameMsg,
    PointerMsg,
    ProtocolError,
    SessionCmdMsg,
    StateMsg,
    decode_message,
    encode_message,
)
from conftest import make_frame


def roundtrip(msg):
    return decode_message(encode_message(msg))


def test_frame_message_round_trip():
    frame = make_frame(4242, Vec3(0.1, 0.9, 2.2), state=HandState.CLOSED)
    msg = FrameMsg(frame)
    assert roundtrip(msg) == msg
    obj = json.loads(encode_message(msg))
    assert obj["type"] == "frame"
    assert obj["ts_us"] == 4242
    assert obj["joints"]["hand_right"] == [0.1, 0.9, 2.2]


def test_pointer_message_round_trip():
    msg = PointerMsg(x=0.25, z=1.8, grab=True)
    assert roundtrip(msg) == msg


def test_session_cmd_round_trip():
    for msg in (
        SessionCmdMsg(cmd="start"),
        SessionCmdMsg(cmd="start", overrides={"dda": {"r0": 0.2}}),
        SessionCmdMsg(cmd="load", id="0000000000001000-abcdef"),
        SessionCmdMsg(cmd="list"),
        SessionCmdMsg(cmd="stop"),
        SessionCmdMsg(cmd="delete", id="x"),
    ):
        assert roundtrip(msg) == msg


def test_state_message_round_trip():
    msg = StateMsg(
        phase="holding",
        feedback=None,
        ball=(0.1, 0.9, 2.0),
        target=(0.25, 2.0),
        radius=0.12,
        score=3,
        frames_seen=240,
        avatar={"shoulder": (0.0, 1.25, 2.45), "elbow": (0.1, 1.1, 2.3)},
        avatar_reached=True,
    )
    assert roundtrip(msg) == msg
    with_feedback = StateMsg(
        phase="feedback", feedback="success", ball=(0, 0.79, 2), target=(0.25, 2.0),
        radius=0.15, score=1, frames_seen=10,
    )
    assert roundtrip(with_feedback) == with_feedback


def test_event_message_matches_log_record_exactly():
    ev = GameEvent(EventKind.RADIUS_CHANGED, 777, new_radius=0.096)
    assert json.loads(encode_message(EventMsg(ev))) == event_to_record(ev)
    assert roundtrip(EventMsg(ev)) == EventMsg(ev)
    plain = GameEvent(EventKind.SUCCESS, 5)
    assert json.loads(encode_message(EventMsg(plain))) == event_to_record(plain)


def test_cmd_result_round_trip():
    for msg in (
        CmdResultMsg(cmd="start", ok=True, payload={"scene": {}}),
        CmdResultMsg(cmd="stop", ok=False, error="no_session"),
    ):
        assert roundtrip(msg) == msg


def test_error_message_round_trip():
    msg = ErrorMsg(code="malformed_json", message="oops")
    assert roundtrip(msg) == msg


def test_invalid_json_raises_with_code():
    with pytest.raises(ProtocolError) as err:
        decode_message("{nope")
    assert err.value.code == "malformed_json"


def test_unknown_type_raises_with_code():
    with pytest.raises(ProtocolError) as err:
        decode_message('{"type":"teleport"}')
    assert err.value.code == "unknown_type"


def test_missing_type_raises():
    with pytest.raises(ProtocolError):
        decode_message('{"x": 1}')
    with pytest.raises(ProtocolError) as err:
        decode_message('[1, 2]')
    assert err.value.code == "malformed_message"


def test_malformed_fields_raise_with_code():
    cases = [
        '{"type":"pointer_input","x":0.1,"z":"far","grab":true}',
        '{"type":"pointer_input","x":0.1,"z":0.2,"grab":"yes"}',
        '{"type":"session_cmd","cmd":"reboot"}',
        '{"type":"session_cmd","cmd":"load","id":7}',
        '{"type":"session_cmd","cmd":"start","overrides":[1]}',
        '{"type":"frame","ts_us":1,"tracked":true,"hand_state":"fist","joints":{}}',
        '{"type":"state","phase":"holding"}',
        '{"type":"cmd_result","cmd":"start","ok":"yes"}',
        '{"type":"event","event":"exploded","ts_us":1}',
    ]
    for text in cases:
        with pytest.raises(ProtocolError) as err:
            decode_message(text)
        assert err.value.code == "malformed_message", text


def _random_message(rng):
    kind = rng.randrange(6)
    if kind == 0:
        frame = make_frame(
            rng.randrange(10**7),
            Vec3(rng.uniform(-1, 1), rng.uniform(0, 2), rng.uniform(0.6, 4.9)),
            state=rng.choice(list(HandState)),
            tracked=rng.random() > 0.2,
        )
        return FrameMsg(frame)
    if kind == 1:
        return PointerMsg(rng.uniform(-1, 1), rng.uniform(1, 3), rng.random() > 0.5)
    if kind == 2:
        return SessionCmdMsg(
            cmd=rng.choice(["start", "stop", "load", "delete", "list"]),
            id=rng.choice([None, "0000000000009999-aaaaaa"]),
        )
    if kind == 3:
        return StateMsg(
            phase=rng.choice(["awaiting_grab", "holding", "feedback"]),
            feedback=rng.choice([None, "success", "try_again"]),
            ball=(rng.uniform(-1, 1), rng.uniform(0.5, 1.5), rng.uniform(1, 3)),
            target=(rng.uniform(-0.5, 0.5), rng.uniform(1.5, 2.5)),
            radius=rng.uniform(0.03, 0.3),
            score=rng.randrange(40),
            frames_seen=rng.randrange(10**5),
        )
    if kind == 4:
        ev_kind = rng.choice(list(EventKind))
        radius = 0.1 if ev_kind is EventKind.RADIUS_CHANGED else None
        return EventMsg(GameEvent(ev_kind, rng.randrange(10**7), new_radius=radius))
    return CmdResultMsg(
        cmd=rng.choice(["start", "stop", "list"]),
        ok=rng.random() > 0.3,
        payload=rng.choice([None, {"n": 1}]),
    )


def test_randomized_round_trip():
    rng = random.Random(31337)
    for _ in range(500):
        msg = _random_message(rng)
        assert roundtrip(msg) == msg


def test_encoding_is_compact_single_line():
    text = encode_message(PointerMsg(0.1, 2.0, False))
    assert "\n" not in text
    assert ": " not in text and ", " not in text
