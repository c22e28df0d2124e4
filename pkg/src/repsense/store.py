"""Local metrics persistence: append-only event log plus daily aggregates.

The log is line-delimited JSON, one repetition event per line, written and
flushed before aggregates change (write-ahead ordering). Aggregates are a
pure function of the log: replaying it into a fresh store reproduces them
byte-identically. Everything stays on local disk; this module has no network
surface. Formats are documented in docs/file-formats.md.
"""

from __future__ import annotations

import json
import os
import statistics
from dataclasses import asdict, dataclass, field
from datetime import date, datetime
from pathlib import Path

from .detect import Leaning, LiftMetrics, MoveKind, RepetitionEvent, RepType

LOG_NAME = "events.ldjson"
AGGREGATES_NAME = "daily.json"

DAY_PARTS = ("morning", "afternoon", "evening")


class StoreError(Exception):
    pass


class IngestError(StoreError):
    pass


def day_part(ts: datetime) -> str:
    if ts.hour < 12:
        return "morning"
    if ts.hour < 18:
        return "afternoon"
    return "evening"


def symmetry_index(left_integral: float, right_integral: float) -> float | None:
    """1 - |L-R|/(L+R) in [0,1]; undefined when both sides carried nothing."""
    if left_integral < 0 or right_integral < 0:
        raise StoreError("load integrals must be non-negative")
    total = left_integral + right_integral
    if total == 0:
        return None
    return 1.0 - abs(left_integral - right_integral) / total


@dataclass
class CanBandDaily:
    s_cb: int = 0
    d_cb_count: int = 0
    t_cb: list[float] = field(default_factory=list)
    distances_m: list[float] = field(default_factory=list)
    grip_avg_n: list[float] = field(default_factory=list)
    grip_peak_n: list[float] = field(default_factory=list)


@dataclass
class DailyMetrics:
    day: str                                   # ISO date
    s: int = 0
    d: int = 0
    t: list[tuple[float, str]] = field(default_factory=list)  # (duration, ISO ts)
    balance_leaning_counts: dict[str, int] = field(
        default_factory=lambda: {"left": 0, "right": 0, "both": 0}
    )
    time_of_day_histogram: dict[str, int] = field(
        default_factory=lambda: {p: 0 for p in DAY_PARTS}
    )
    canband: CanBandDaily = field(default_factory=CanBandDaily)

    def check(self) -> None:
        assert self.s >= 0 and self.d >= 0
        assert len(self.t) == self.d
        assert sum(self.time_of_day_histogram.values()) == self.s + self.d
        assert len(self.canband.t_cb) == self.canband.d_cb_count


@dataclass(frozen=True, slots=True)
class QualityMetrics:
    mean_double_time_s: float | None
    consistency_cv: float | None       # population stddev / mean, needs >= 2 doubles
    symmetry_indices: tuple[float, ...] = ()  # live per-cycle values, not persisted


def event_record(event: RepetitionEvent, ts: datetime) -> dict:
    """The exact log-line schema; field order is part of the on-disk format."""
    return {
        "ts": ts.isoformat(),
        "kind": event.kind.value,
        "rep_type": event.rep_type.value,
        "duration_s": event.duration_s,
        "sensor_signature": event.sensor_signature,
        "balance_leaning": event.balance_leaning.value if event.balance_leaning else None,
        "lift_metrics": asdict(event.lift_metrics) if event.lift_metrics else None,
    }


def record_to_event(record: dict) -> tuple[RepetitionEvent, datetime]:
    ts = datetime.fromisoformat(record["ts"])
    lift = record.get("lift_metrics")
    leaning = record.get("balance_leaning")
    event = RepetitionEvent(
        rep_type=RepType(record["rep_type"]),
        kind=MoveKind(record["kind"]),
        duration_s=float(record["duration_s"]),
        sensor_signature=record["sensor_signature"],
        occurred_at_s=0.0,
        balance_leaning=Leaning(leaning) if leaning else None,
        lift_metrics=LiftMetrics(**lift) if lift else None,
    )
    return event, ts


class MetricsStore:
    """Single-writer store; daily aggregates rebuilt from the log on open."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.log_path = self.root / LOG_NAME
        self.aggregates_path = self.root / AGGREGATES_NAME
        self._days: dict[str, DailyMetrics] = {}
        if self.log_path.exists():
            self._days = replay_log(self.log_path)
        self._log = open(self.log_path, "a", encoding="utf-8")

    def close(self) -> None:
        self.checkpoint()
        self._log.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    # -- writes ------------------------------------------------------------

    def ingest_event(self, event: RepetitionEvent, ts: datetime) -> DailyMetrics:
        record = event_record(event, ts)
        line = json.dumps(record, separators=(",", ":"))
        try:
            self._log.write(line + "\n")
            self._log.flush()
            os.fsync(self._log.fileno())
        except (OSError, ValueError) as e:
            raise IngestError(f"event log write failed: {e}") from e
        day = _apply_record(self._days, json.loads(line))
        day.check()
        return day

    def checkpoint(self) -> None:
        data = aggregates_json(self._days)
        tmp = self.aggregates_path.with_suffix(".tmp")
        tmp.write_bytes(data)
        tmp.replace(self.aggregates_path)

    # -- reads -------------------------------------------------------------

    def day(self, d: date | str) -> DailyMetrics:
        key = d.isoformat() if isinstance(d, date) else d
        return self._days.get(key, DailyMetrics(day=key))

    def days(self) -> dict[str, DailyMetrics]:
        return dict(self._days)

    def daily_summary(self, d: date | str) -> tuple[DailyMetrics, QualityMetrics]:
        metrics = self.day(d)
        return metrics, quality_of(metrics)

    def weekly_window(self, end_date: date) -> list[int]:
        """Doubles counts for the 7 calendar days ending at end_date, oldest first."""
        out = []
        for offset in range(6, -1, -1):
            key = date.fromordinal(end_date.toordinal() - offset).isoformat()
            out.append(self._days[key].d if key in self._days else 0)
        return out

    def aggregates_bytes(self) -> bytes:
        return aggregates_json(self._days)


def quality_of(metrics: DailyMetrics) -> QualityMetrics:
    durations = [d for d, _ in metrics.t]
    mean = statistics.fmean(durations) if durations else None
    cv = None
    if len(durations) >= 2 and mean:
        cv = statistics.pstdev(durations) / mean
    return QualityMetrics(mean_double_time_s=mean, consistency_cv=cv)


def _apply_record(days: dict[str, DailyMetrics], record: dict) -> DailyMetrics:
    ts = datetime.fromisoformat(record["ts"])
    key = ts.date().isoformat()
    day = days.setdefault(key, DailyMetrics(day=key))
    double = record["rep_type"] == "double"
    if record["kind"] == "sit_to_stand":
        if double:
            day.d += 1
            day.t.append((float(record["duration_s"]), record["ts"]))
            leaning = record.get("balance_leaning")
            if leaning and leaning != "none":
                day.balance_leaning_counts[leaning] += 1
        else:
            day.s += 1
        day.time_of_day_histogram[day_part(ts)] += 1
    else:
        lift = record["lift_metrics"]
        if double:
            day.canband.d_cb_count += 1
            day.canband.t_cb.append(float(record["duration_s"]))
            day.canband.distances_m.append(float(lift["distance_m"]))
        else:
            day.canband.s_cb += 1
        day.canband.grip_avg_n.append(float(lift["grip_avg_n"]))
        day.canband.grip_peak_n.append(float(lift["grip_peak_n"]))
    return day


def replay_log(log_path: str | Path) -> dict[str, DailyMetrics]:
    """Rebuild aggregates from an event log; the recovery and audit path."""
    days: dict[str, DailyMetrics] = {}
    with open(log_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise StoreError(f"{log_path}:{lineno}: bad event line: {e}") from None
            _apply_record(days, record)
    return days


def aggregates_json(days: dict[str, DailyMetrics]) -> bytes:
    doc = {}
    for key in sorted(days):
        m = days[key]
        doc[key] = {
            "s": m.s,
            "d": m.d,
            "t": [[dur, ts] for dur, ts in m.t],
            "balance_leaning": m.balance_leaning_counts,
            "histogram": m.time_of_day_histogram,
            "canband": {
                "s_cb": m.canband.s_cb,
                "d_cb_count": m.canband.d_cb_count,
                "t_cb": m.canband.t_cb,
                "distances_m": m.canband.distances_m,
                "grip_avg_n": m.canband.grip_avg_n,
                "grip_peak_n": m.canband.grip_peak_n,
            },
        }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode() + b"\n"
