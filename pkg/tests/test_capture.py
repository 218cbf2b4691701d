import json
import math
import random
import statistics

import pytest

from reachgame.capture import (
    EmptyScript,
    MalformedRecord,
    MovementScript,
    NoiseModel,
    frame_from_record,
    frame_to_record,
    generate,
    noise_sigma,
    open_replay,
    write_frames,
)
from reachgame.model import (
    HandState,
    JointId,
    NonMonotonicTimestamp,
    SkeletonFrame,
    Vec3,
)
from conftest import make_frame


def test_noise_sigma_endpoints():
    model = NoiseModel()
    assert noise_sigma(model, 0.5) == pytest.approx(0.002)
    assert noise_sigma(model, 5.0) == pytest.approx(0.040)


def test_noise_sigma_midpoint():
    # Hand arithmetic: 0.002 + 0.038 * (2.75 - 0.5) / 4.5 = 0.021.
    assert noise_sigma(NoiseModel(), 2.75) == pytest.approx(0.021)


def test_noise_sigma_constant_outside_envelope():
    model = NoiseModel()
    assert noise_sigma(model, 0.1) == noise_sigma(model, 0.5)
    assert noise_sigma(model, 0.0) == noise_sigma(model, 0.5)
    assert noise_sigma(model, 9.0) == noise_sigma(model, 5.0)


def test_noise_sigma_monotone():
    model = NoiseModel(sigma_near=0.001, sigma_far=0.05)
    rng = random.Random(7)
    ds = sorted(rng.uniform(0.0, 8.0) for _ in range(200))
    sigmas = [noise_sigma(model, d) for d in ds]
    assert all(b >= a for a, b in zip(sigmas, sigmas[1:]))


def test_noise_model_rejects_inverted_sigmas():
    with pytest.raises(ValueError):
        NoiseModel(sigma_near=0.05, sigma_far=0.01)
    with pytest.raises(ValueError):
        NoiseModel(sigma_near=-0.001, sigma_far=0.01)


def test_script_rejects_unordered_waypoints():
    p = Vec3(0, 1, 2)
    with pytest.raises(ValueError):
        MovementScript(waypoints=((0, p), (0, p)))
    with pytest.raises(ValueError):
        MovementScript(waypoints=((100, p), (50, p)))


def test_script_rejects_bad_knobs():
    p = Vec3(0, 1, 2)
    wps = ((0, p), (1000, p))
    with pytest.raises(ValueError):
        MovementScript(waypoints=wps, tremor_amplitude=-0.01)
    with pytest.raises(ValueError):
        MovementScript(waypoints=wps, speed_scale=0.0)
    with pytest.raises(ValueError):
        MovementScript(waypoints=wps, speed_scale=1.5)


def _line_script(a, b, seconds):
    return MovementScript(waypoints=((0, a), (int(seconds * 1e6), b)))


def test_generate_noiseless_samples_the_segment():
    """Two waypoints 1 s apart at 30 fps give 31 frames exactly on the line."""
    a, b = Vec3(0.0, 1.0, 2.0), Vec3(0.3, 1.0, 2.0)
    frames = list(generate(_line_script(a, b, 1.0), NoiseModel.off(), seed=1))
    assert len(frames) == 31
    assert frames[0].hand() == a
    assert frames[-1].hand() == b
    for f in frames:
        u = f.timestamp_us / 1e6
        expect = a + (b - a).scaled(u)
        assert f.hand().distance_to(expect) < 1e-12
        assert f.tracked


def test_generate_deterministic_for_fixed_seed():
    script = _line_script(Vec3(0, 1, 2), Vec3(0.3, 1.2, 2.5), 2.0)
    runs = [
        [frame_to_record(f) for f in generate(script, NoiseModel(), seed=42)]
        for _ in range(2)
    ]
    assert runs[0] == runs[1]


def test_generate_seed_changes_stream():
    script = _line_script(Vec3(0, 1, 2), Vec3(0.3, 1.2, 2.5), 1.0)
    one = [frame_to_record(f) for f in generate(script, NoiseModel(), seed=1)]
    two = [frame_to_record(f) for f in generate(script, NoiseModel(), seed=2)]
    assert one != two


def test_generate_static_pose_noise_std():
    """Monte-Carlo: flat sigma 0.01 at z=2 gives per-axis std near 0.01."""
    p = Vec3(0.0, 0.0, 2.0)
    script = MovementScript(waypoints=((0, p), (int(334e6), p)))
    noise = NoiseModel(sigma_near=0.01, sigma_far=0.01)
    xs, ys, zs = [], [], []
    for i, f in enumerate(generate(script, noise, seed=99)):
        if i >= 10_000:
            break
        h = f.hand()
        xs.append(h.x)
        ys.append(h.y)
        zs.append(h.z)
    assert len(xs) == 10_000
    for axis in (xs, ys, zs):
        assert 0.0095 <= statistics.pstdev(axis) <= 0.0105


def test_generate_speed_scale_stretches_transit():
    a, b = Vec3(0.0, 1.0, 2.0), Vec3(0.3, 1.0, 2.0)
    script = MovementScript(waypoints=((0, a), (1_000_000, b)), speed_scale=0.5)
    frames = list(generate(script, NoiseModel.off(), seed=0))
    # 1 s of nominal transit takes 2 s at half speed.
    assert frames[-1].timestamp_us == 2_000_000
    mid = [f for f in frames if f.timestamp_us == 1_000_000][0]
    assert mid.hand().distance_to(a + (b - a).scaled(0.5)) < 1e-12


def test_generate_tremor_is_a_lateral_sinusoid():
    p = Vec3(0.0, 1.0, 2.0)
    script = MovementScript(
        waypoints=((0, p), (1_000_000, p)),
        tremor_amplitude=0.02,
        tremor_frequency=4.0,
    )
    for f in generate(script, NoiseModel.off(), seed=0):
        t = f.timestamp_us / 1e6
        assert f.hand().x == pytest.approx(0.02 * math.sin(2 * math.pi * 4.0 * t))
        assert f.hand().y == 1.0
        assert f.hand().z == 2.0


def test_generate_hand_schedule():
    p = Vec3(0.0, 1.0, 2.0)
    script = MovementScript(
        waypoints=((0, p), (1_000_000, p)),
        hand_schedule=((300_000, HandState.CLOSED), (700_000, HandState.OPEN)),
    )
    for f in generate(script, NoiseModel.off(), seed=0):
        t = f.timestamp_us
        if t < 300_000:
            assert f.right_hand_state is HandState.OPEN
        elif t < 700_000:
            assert f.right_hand_state is HandState.CLOSED
        else:
            assert f.right_hand_state is HandState.OPEN


def test_generate_rejects_empty_script_and_bad_fps():
    with pytest.raises(EmptyScript):
        generate(MovementScript(waypoints=()), NoiseModel.off(), seed=0)
    script = _line_script(Vec3(0, 1, 2), Vec3(0, 1, 2.5), 1.0)
    with pytest.raises(ValueError):
        generate(script, NoiseModel.off(), seed=0, fps=0.0)


def test_generate_marks_out_of_envelope_frames_untracked():
    # A scripted hand that walks past z = 5 must not claim tracked. The
    # trunk joints trail the hand by 0.35 in z, so start shy of 4.65.
    script = _line_script(Vec3(0, 1, 4.5), Vec3(0, 1, 5.4), 1.0)
    frames = list(generate(script, NoiseModel.off(), seed=0))
    tracked_flags = [f.tracked for f in frames]
    assert tracked_flags[0] is True
    assert tracked_flags[-1] is False


def _random_frames(rng, n):
    frames = []
    ts = 0
    for _ in range(n):
        ts += rng.randrange(1, 40_000)
        hand = Vec3(rng.uniform(-1, 1), rng.uniform(0, 2), rng.uniform(0.6, 4.9))
        state = rng.choice(list(HandState))
        tracked = rng.random() > 0.1
        joints = {JointId.HAND_RIGHT: hand}
        if rng.random() > 0.5:
            joints[JointId.HEAD] = hand + Vec3(-0.3, 0.7, 0.05)
        if not tracked and rng.random() > 0.5:
            joints[JointId.HAND_RIGHT] = Vec3(hand.x, hand.y, 7.0)
        frames.append(SkeletonFrame(ts, joints, state, tracked))
    return frames


def test_frame_file_round_trip(tmp_path):
    rng = random.Random(55)
    frames = _random_frames(rng, 120)
    path = tmp_path / "frames.jsonl"
    assert write_frames(path, frames) == 120
    back = list(open_replay(path))
    assert back == frames


def test_replay_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    assert list(open_replay(path)) == []


def test_replay_preserves_order_and_count(tmp_path):
    frames = [make_frame(i * 10, Vec3(0, 1, 2)) for i in range(3)]
    path = tmp_path / "three.jsonl"
    write_frames(path, frames)
    assert [f.timestamp_us for f in open_replay(path)] == [0, 10, 20]


def test_replay_rejects_unknown_joint_with_line_number(tmp_path):
    good = json.dumps(frame_to_record(make_frame(0, Vec3(0, 1, 2))))
    bad = json.dumps(
        {"ts_us": 10, "tracked": True, "hand_state": "open",
         "joints": {"hand_right": [0, 1, 2], "left_pinky": [0, 0, 1]}}
    )
    path = tmp_path / "frames.jsonl"
    path.write_text(good + "\n" + bad + "\n")
    source = open_replay(path)
    next(source)
    with pytest.raises(MalformedRecord) as err:
        next(source)
    assert err.value.line_number == 2
    assert "left_pinky" in str(err.value)


def test_replay_rejects_invalid_json_with_line_number(tmp_path):
    path = tmp_path / "frames.jsonl"
    path.write_text("{not json\n")
    with pytest.raises(MalformedRecord) as err:
        next(open_replay(path))
    assert err.value.line_number == 1


def test_replay_rejects_backwards_timestamps(tmp_path):
    frames = [make_frame(100, Vec3(0, 1, 2)), make_frame(50, Vec3(0, 1, 2))]
    path = tmp_path / "frames.jsonl"
    with open(path, "w") as f:
        for fr in frames:
            f.write(json.dumps(frame_to_record(fr)) + "\n")
    source = open_replay(path)
    next(source)
    with pytest.raises(NonMonotonicTimestamp) as err:
        next(source)
    assert "line 2" in str(err.value)


def test_replay_skips_blank_lines(tmp_path):
    rec = json.dumps(frame_to_record(make_frame(0, Vec3(0, 1, 2))))
    path = tmp_path / "frames.jsonl"
    path.write_text(rec + "\n\n" + rec + "\n")
    assert len(list(open_replay(path))) == 2


def test_replay_once_ended_stays_ended(tmp_path):
    path = tmp_path / "one.jsonl"
    write_frames(path, [make_frame(0, Vec3(0, 1, 2))])
    source = open_replay(path)
    assert len(list(source)) == 1
    assert list(source) == []


def test_record_decode_rejects_malformed_fields():
    base = frame_to_record(make_frame(0, Vec3(0, 1, 2)))
    for mutate in (
        lambda o: o.pop("ts_us"),
        lambda o: o.update(ts_us=True),
        lambda o: o.update(ts_us=1.5),
        lambda o: o.update(tracked="yes"),
        lambda o: o.update(hand_state="fist"),
        lambda o: o.update(joints={"hand_right": [0, 1]}),
        lambda o: o.update(joints={"hand_right": [0, 1, "x"]}),
        lambda o: o.update(joints="none"),
    ):
        obj = json.loads(json.dumps(base))
        mutate(obj)
        with pytest.raises(ValueError):
            frame_from_record(obj)


def test_record_round_trip_exact_floats():
    frame = make_frame(123, Vec3(0.1 + 0.2, -1.7976e308 / 1e300, 2.000000001))
    assert frame_from_record(json.loads(json.dumps(frame_to_record(frame)))) == frame
