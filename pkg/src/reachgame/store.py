"""Session storage: one file per session under a store root.

A session file is line-delimited JSON: a single header record carrying
configs and denormalized metrics, then one record per drop and per event.
Saves are atomic (write to a temp file, then rename), so a crash mid-write
leaves either the previous state or the complete new record. Metrics are
re-derived from the drops on load and verified against the stored header
to catch corruption.
"""

from __future__ import annotations

import json
import math
import os
import secrets
import time
from dataclasses import dataclass, field

from .config import (
    dda_from_obj,
    dda_to_obj,
    gesture_from_obj,
    gesture_to_obj,
    scene_from_obj,
    scene_to_obj,
)
from .difficulty import DdaConfig
from .engine import DropRecord, GameEvent, event_from_record, event_to_record
from .gesture import GestureConfig
from .metrics import (
    SessionMetrics,
    compute_metrics,
    metrics_from_obj,
    metrics_to_obj,
)
from .model import SceneConfig, Vec3

SCHEMA_VERSION = 1

_TMP_PREFIX = ".tmp-"


class StoreError(Exception):
    pass


class StoreUnwritable(StoreError):
    pass


class DuplicateId(StoreError):
    pass


class NotFound(StoreError):
    pass


class SchemaMismatch(StoreError):
    pass


class CorruptRecord(StoreError):
    pass


@dataclass(frozen=True)
class SessionRecord:
    session_id: str
    created_at_us: int
    scene: SceneConfig
    dda: DdaConfig
    gesture: GestureConfig
    drops: tuple[DropRecord, ...]
    events: tuple[GameEvent, ...]
    metrics: SessionMetrics
    schema_version: int = SCHEMA_VERSION


@dataclass(frozen=True)
class SessionSummary:
    session_id: str
    created_at_us: int
    n_drops: int
    hit_rate: float | None


def new_session_id(created_at_us: int) -> str:
    """Creation-time prefix keeps ids human-sortable; the random suffix
    keeps them collision-safe without coordination."""
    return f"{created_at_us:016d}-{secrets.token_hex(3)}"


def new_record(
    scene: SceneConfig,
    dda: DdaConfig,
    gesture: GestureConfig,
    drops,
    events,
    created_at_us: int | None = None,
    session_id: str | None = None,
) -> SessionRecord:
    """Assemble a SessionRecord with metrics derived from the drops."""
    if created_at_us is None:
        created_at_us = time.time_ns() // 1000
    if session_id is None:
        session_id = new_session_id(created_at_us)
    drops = tuple(drops)
    return SessionRecord(
        session_id=session_id,
        created_at_us=created_at_us,
        scene=scene,
        dda=dda,
        gesture=gesture,
        drops=drops,
        events=tuple(events),
        metrics=compute_metrics(list(drops), scene.target_center),
    )


def drop_to_record(drop: DropRecord) -> dict:
    return {
        "type": "drop",
        "ts_us": drop.timestamp_us,
        "release_pos": [drop.release_pos.x, drop.release_pos.y, drop.release_pos.z],
        "landing_xz": list(drop.landing_xz),
        "radial_error": drop.radial_error,
        "target_radius": drop.target_radius_at_drop,
        "hit": drop.hit,
    }


def drop_from_record(obj: dict) -> DropRecord:
    return DropRecord(
        release_pos=Vec3(*obj["release_pos"]),
        landing_xz=(obj["landing_xz"][0], obj["landing_xz"][1]),
        radial_error=obj["radial_error"],
        target_radius_at_drop=obj["target_radius"],
        hit=obj["hit"],
        timestamp_us=obj["ts_us"],
    )


def _record_lines(record: SessionRecord):
    header = {
        "type": "session",
        "schema_version": record.schema_version,
        "session_id": record.session_id,
        "created_at_us": record.created_at_us,
        "scene": scene_to_obj(record.scene),
        "dda": dda_to_obj(record.dda),
        "gesture": gesture_to_obj(record.gesture),
        "metrics": metrics_to_obj(record.metrics),
    }
    yield header
    for drop in record.drops:
        yield drop_to_record(drop)
    for event in record.events:
        yield event_to_record(event)


def save(store_root, record: SessionRecord) -> str:
    """Durably write ``record``; returns its session id."""
    try:
        os.makedirs(store_root, exist_ok=True)
    except OSError as e:
        raise StoreUnwritable(f"cannot create store root: {e}") from None
    final = os.path.join(store_root, record.session_id)
    if os.path.exists(final):
        raise DuplicateId(record.session_id)
    tmp = os.path.join(store_root, _TMP_PREFIX + record.session_id)
    try:
        with open(tmp, "w", encoding="utf-8") as f:
            for obj in _record_lines(record):
                f.write(json.dumps(obj, separators=(",", ":")))
                f.write("\n")
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, final)
    except OSError as e:
        raise StoreUnwritable(str(e)) from None
    return record.session_id


def _metrics_close(a: SessionMetrics, b: SessionMetrics) -> bool:
    if a.n_drops != b.n_drops:
        return False
    for x, y in (
        (a.hit_rate, b.hit_rate),
        (a.accuracy_mre, b.accuracy_mre),
        (a.precision_rms, b.precision_rms),
        (a.final_radius, b.final_radius),
    ):
        if (x is None) != (y is None):
            return False
        if x is not None and not math.isclose(x, y, rel_tol=1e-9, abs_tol=1e-12):
            return False
    return True


def load(store_root, session_id: str) -> SessionRecord:
    """Load a stored session, verifying schema version and that the stored
    metrics agree with the drops."""
    path = os.path.join(store_root, session_id)
    if not os.path.isfile(path):
        raise NotFound(session_id)
    return load_file(path, label=session_id)


def load_file(path, label: str | None = None) -> SessionRecord:
    """Parse and verify a session file directly, outside any store root."""
    session_id = label if label is not None else os.path.basename(str(path))
    if not os.path.isfile(path):
        raise NotFound(session_id)
    header = None
    drops: list[DropRecord] = []
    events: list[GameEvent] = []
    try:
        with open(path, "r", encoding="utf-8") as f:
            for line in f:
                if line.strip() == "":
                    continue
                obj = json.loads(line)
                kind = obj.get("type")
                if kind == "session":
                    header = obj
                elif kind == "drop":
                    drops.append(drop_from_record(obj))
                elif kind == "event":
                    events.append(event_from_record(obj))
                else:
                    raise CorruptRecord(f"{session_id}: unknown record type {kind!r}")
    except (json.JSONDecodeError, KeyError, ValueError, TypeError) as e:
        raise CorruptRecord(f"{session_id}: {e}") from None
    if header is None:
        raise CorruptRecord(f"{session_id}: missing session header")
    if header.get("schema_version") != SCHEMA_VERSION:
        raise SchemaMismatch(
            f"{session_id}: schema {header.get('schema_version')!r}, "
            f"expected {SCHEMA_VERSION}"
        )
    try:
        scene = scene_from_obj(header["scene"], SceneConfig())
        dda = dda_from_obj(header["dda"], DdaConfig())
        gesture = gesture_from_obj(header["gesture"], GestureConfig())
        stored_metrics = metrics_from_obj(header["metrics"])
    except (KeyError, ValueError) as e:
        raise CorruptRecord(f"{session_id}: bad header: {e}") from None
    recomputed = compute_metrics(drops, scene.target_center)
    if not _metrics_close(stored_metrics, recomputed):
        raise CorruptRecord(f"{session_id}: stored metrics disagree with drops")
    return SessionRecord(
        session_id=header["session_id"],
        created_at_us=header["created_at_us"],
        scene=scene,
        dda=dda,
        gesture=gesture,
        drops=tuple(drops),
        events=tuple(events),
        metrics=recomputed,
    )


def delete(store_root, session_id: str) -> None:
    """Remove a stored session; deleting a missing id raises NotFound."""
    path = os.path.join(store_root, session_id)
    if not os.path.isfile(path):
        raise NotFound(session_id)
    os.remove(path)


def list_sessions(store_root) -> list[SessionSummary]:
    """Summaries of every stored session, sorted by creation time."""
    if not os.path.isdir(store_root):
        return []
    summaries = []
    for name in os.listdir(store_root):
        if name.startswith(_TMP_PREFIX):
            continue
        path = os.path.join(store_root, name)
        if not os.path.isfile(path):
            continue
        try:
            with open(path, "r", encoding="utf-8") as f:
                header = json.loads(f.readline())
            metrics = header["metrics"]
            summaries.append(
                SessionSummary(
                    session_id=header["session_id"],
                    created_at_us=header["created_at_us"],
                    n_drops=metrics["n_drops"],
                    hit_rate=metrics["hit_rate"],
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError, OSError):
            # Unreadable entries are skipped rather than failing the listing.
            continue
    summaries.sort(key=lambda s: (s.created_at_us, s.session_id))
    return summaries
