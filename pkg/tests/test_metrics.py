import math
import random

import pytest

from reachgame.engine import DropRecord
from reachgame.metrics import (
    MetricsAccumulator,
    SessionMetrics,
    compute_metrics,
    metrics_by_radius,
    metrics_from_obj,
    metrics_to_obj,
    render_report,
    report_records,
)
from reachgame.model import Vec3

TARGET = (0.25, 2.0)


def drop(x, z, radius=0.15, target=TARGET, ts=0):
    err = math.dist((x, z), target)
    return DropRecord(
        release_pos=Vec3(x, 1.0, z),
        landing_xz=(x, z),
        radial_error=err,
        target_radius_at_drop=radius,
        hit=err <= radius,
        timestamp_us=ts,
    )


def test_single_drop_on_center():
    m = compute_metrics([drop(*TARGET)], TARGET)
    assert m.n_drops == 1
    assert m.hit_rate == 1.0
    assert m.accuracy_mre == 0.0
    assert m.precision_rms == 0.0
    assert m.final_radius == 0.15


def test_symmetric_pair_exact_values():
    """Landings 0.1 either side of the target: both error and scatter
    come out at exactly 0.1."""
    center = (0.0, 0.0)
    drops = [drop(0.1, 0.0, target=center), drop(-0.1, 0.0, target=center)]
    m = compute_metrics(drops, center)
    assert m.accuracy_mre == 0.1
    assert m.precision_rms == 0.1
    assert m.hit_rate == 1.0


def test_empty_session_reports_absent():
    m = compute_metrics([], TARGET)
    assert m == SessionMetrics.absent()
    assert m.n_drops == 0
    assert m.hit_rate is None
    assert m.accuracy_mre is None
    assert m.precision_rms is None
    assert m.final_radius is None


def test_hit_rate_is_a_fraction():
    drops = [drop(*TARGET), drop(*TARGET), drop(1.0, 3.0), drop(1.2, 3.0)]
    assert compute_metrics(drops, TARGET).hit_rate == 0.5


def test_final_radius_tracks_last_drop():
    drops = [drop(0, 2, radius=0.15), drop(0, 2, radius=0.12)]
    assert compute_metrics(drops, TARGET).final_radius == 0.12


def test_precision_ignores_systematic_offset():
    rng = random.Random(12)
    scatter = [(rng.gauss(0, 0.02), rng.gauss(0, 0.02)) for _ in range(50)]
    near = [drop(TARGET[0] + dx, TARGET[1] + dz) for dx, dz in scatter]
    shifted = [drop(TARGET[0] + 0.3 + dx, TARGET[1] - 0.2 + dz) for dx, dz in scatter]
    a = compute_metrics(near, TARGET)
    b = compute_metrics(shifted, TARGET)
    assert b.precision_rms == pytest.approx(a.precision_rms, abs=1e-12)
    assert b.accuracy_mre > a.accuracy_mre


def test_batch_metrics_order_independent():
    rng = random.Random(3)
    drops = [drop(rng.uniform(-0.5, 0.5), rng.uniform(1.6, 2.4)) for _ in range(40)]
    shuffled = drops[:]
    rng.shuffle(shuffled)
    a = compute_metrics(drops, TARGET)
    b = compute_metrics(shuffled, TARGET)
    assert b.accuracy_mre == pytest.approx(a.accuracy_mre, rel=1e-12)
    assert b.precision_rms == pytest.approx(a.precision_rms, rel=1e-12)
    assert b.hit_rate == a.hit_rate


def test_streaming_matches_batch():
    rng = random.Random(9001)
    for _ in range(200):
        n = rng.randrange(0, 40)
        drops = [
            drop(rng.uniform(-0.6, 0.6), rng.uniform(1.6, 2.4),
                 radius=rng.choice([0.15, 0.12, 0.096]))
            for _ in range(n)
        ]
        acc = MetricsAccumulator(TARGET)
        for d in drops:
            acc.add(d)
        got = acc.result()
        want = compute_metrics(drops, TARGET)
        assert got.n_drops == want.n_drops
        assert got.hit_rate == want.hit_rate
        assert got.final_radius == want.final_radius
        if n == 0:
            assert got == SessionMetrics.absent()
        else:
            assert abs(got.accuracy_mre - want.accuracy_mre) <= 1e-12
            assert abs(got.precision_rms - want.precision_rms) <= 1e-12


def test_empty_accumulator_is_absent():
    assert MetricsAccumulator(TARGET).result() == SessionMetrics.absent()


def test_grouping_by_radius_first_appearance_order():
    drops = [
        drop(0, 2, radius=0.15),
        drop(0, 2, radius=0.15),
        drop(0, 2, radius=0.12),
        drop(0, 2, radius=0.15),
    ]
    levels = metrics_by_radius(drops, TARGET)
    assert [r for r, _ in levels] == [0.15, 0.12]
    assert [m.n_drops for _, m in levels] == [3, 1]


def test_obj_round_trip():
    m = compute_metrics([drop(0.3, 2.1), drop(0.2, 1.9)], TARGET)
    assert metrics_from_obj(metrics_to_obj(m)) == m
    absent = SessionMetrics.absent()
    assert metrics_from_obj(metrics_to_obj(absent)) == absent


def test_report_displays_millimeters():
    text = render_report([drop(TARGET[0] + 0.1, TARGET[1], radius=0.15)], TARGET)
    assert "100 mm" in text          # accuracy line
    assert "150 mm" in text          # radius line
    assert "hit rate:  100.0%" in text


def test_report_for_empty_session_shows_dashes():
    text = render_report([], TARGET)
    assert "drops:     0" in text
    assert "-" in text
    assert "mm" not in text.replace("summary", "")


def test_report_records_shape():
    drops = [drop(0, 2, radius=0.15), drop(0, 2, radius=0.12)]
    records = report_records(drops, TARGET)
    assert [r["type"] for r in records] == ["level", "level", "session"]
    assert records[0]["radius"] == 0.15
    assert records[-1]["n_drops"] == 2
    for r in records:
        assert set(r) >= {"n_drops", "hit_rate", "accuracy_mre", "precision_rms"}
