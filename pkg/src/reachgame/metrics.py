"""Movement-quality measures over drop records.

Accuracy is the mean radial error of landings from the target center;
precision is the RMS scatter of landings about their own centroid, so it
ignores any systematic offset. An empty session reports absent metrics
(None), never zeros: absence is not perfection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .engine import DropRecord


@dataclass(frozen=True)
class SessionMetrics:
    n_drops: int
    hit_rate: float | None
    accuracy_mre: float | None    # meters, mean radial error to target
    precision_rms: float | None   # meters, RMS about landing centroid
    final_radius: float | None    # target radius at the last drop

    @classmethod
    def absent(cls) -> "SessionMetrics":
        return cls(0, None, None, None, None)


def compute_metrics(
    drops: list[DropRecord], target_center: tuple[float, float]
) -> SessionMetrics:
    """Batch metrics over a whole drop list. Order-independent."""
    n = len(drops)
    if n == 0:
        return SessionMetrics.absent()
    tx, tz = target_center
    hits = sum(1 for d in drops if d.hit)
    mre = sum(
        math.hypot(d.landing_xz[0] - tx, d.landing_xz[1] - tz) for d in drops
    ) / n
    cx = sum(d.landing_xz[0] for d in drops) / n
    cz = sum(d.landing_xz[1] for d in drops) / n
    msd = sum(
        (d.landing_xz[0] - cx) ** 2 + (d.landing_xz[1] - cz) ** 2 for d in drops
    ) / n
    return SessionMetrics(
        n_drops=n,
        hit_rate=hits / n,
        accuracy_mre=mre,
        precision_rms=math.sqrt(msd),
        final_radius=drops[-1].target_radius_at_drop,
    )


class MetricsAccumulator:
    """Streaming metrics via running moments (Welford); matches the batch
    computation to floating-point accuracy without storing drops."""

    def __init__(self, target_center: tuple[float, float]):
        self._target = target_center
        self._n = 0
        self._hits = 0
        self._err_sum = 0.0
        self._mean_x = 0.0
        self._mean_z = 0.0
        self._m2 = 0.0  # sum of squared deviations from the running centroid
        self._final_radius: float | None = None

    def add(self, drop: DropRecord) -> None:
        tx, tz = self._target
        x, z = drop.landing_xz
        self._n += 1
        if drop.hit:
            self._hits += 1
        self._err_sum += math.hypot(x - tx, z - tz)
        dx = x - self._mean_x
        dz = z - self._mean_z
        self._mean_x += dx / self._n
        self._mean_z += dz / self._n
        self._m2 += dx * (x - self._mean_x) + dz * (z - self._mean_z)
        self._final_radius = drop.target_radius_at_drop

    def result(self) -> SessionMetrics:
        if self._n == 0:
            return SessionMetrics.absent()
        return SessionMetrics(
            n_drops=self._n,
            hit_rate=self._hits / self._n,
            accuracy_mre=self._err_sum / self._n,
            precision_rms=math.sqrt(max(self._m2, 0.0) / self._n),
            final_radius=self._final_radius,
        )


def metrics_by_radius(
    drops: list[DropRecord], target_center: tuple[float, float]
) -> list[tuple[float, SessionMetrics]]:
    """Metrics grouped by the target radius in force at each drop, in
    order of first appearance."""
    groups: dict[float, list[DropRecord]] = {}
    for d in drops:
        groups.setdefault(d.target_radius_at_drop, []).append(d)
    return [(r, compute_metrics(ds, target_center)) for r, ds in groups.items()]


def metrics_to_obj(m: SessionMetrics) -> dict:
    return {
        "n_drops": m.n_drops,
        "hit_rate": m.hit_rate,
        "accuracy_mre": m.accuracy_mre,
        "precision_rms": m.precision_rms,
        "final_radius": m.final_radius,
    }


def metrics_from_obj(obj: dict) -> SessionMetrics:
    return SessionMetrics(
        n_drops=int(obj["n_drops"]),
        hit_rate=obj["hit_rate"],
        accuracy_mre=obj["accuracy_mre"],
        precision_rms=obj["precision_rms"],
        final_radius=obj["final_radius"],
    )


def _mm(meters: float | None) -> str:
    return "-" if meters is None else f"{round(meters * 1000)} mm"


def _pct(fraction: float | None) -> str:
    return "-" if fraction is None else f"{fraction * 100:.1f}%"


def render_report(
    drops: list[DropRecord], target_center: tuple[float, float]
) -> str:
    """Human-readable session report: overall summary plus one line per
    target-radius level. Distances display at 1 mm precision."""
    total = compute_metrics(drops, target_center)
    lines = [
        "session summary",
        f"  drops:     {total.n_drops}",
        f"  hit rate:  {_pct(total.hit_rate)}",
        f"  accuracy:  {_mm(total.accuracy_mre)} (mean radial error)",
        f"  precision: {_mm(total.precision_rms)} (rms scatter)",
        f"  final target radius: {_mm(total.final_radius)}",
    ]
    levels = metrics_by_radius(drops, target_center)
    if levels:
        lines.append("per-radius levels")
        lines.append("  radius    drops  hit rate  accuracy  precision")
        for radius, m in levels:
            lines.append(
                f"  {_mm(radius):>8}  {m.n_drops:>5}  {_pct(m.hit_rate):>8}"
                f"  {_mm(m.accuracy_mre):>8}  {_mm(m.precision_rms):>9}"
            )
    return "\n".join(lines) + "\n"


def report_records(
    drops: list[DropRecord], target_center: tuple[float, float]
) -> list[dict]:
    """Machine-readable report: one record per radius level plus a session
    summary, in the same line-delimited object style as the other formats."""
    records = [
        {"type": "level", "radius": r, **metrics_to_obj(m)}
        for r, m in metrics_by_radius(drops, target_center)
    ]
    records.append({"type": "session", **metrics_to_obj(compute_metrics(drops, target_center))})
    return records
