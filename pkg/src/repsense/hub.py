"""Hub service: packet ingest and ordering, the detection pipeline, session
state (pause / goal masking), the event stream for the UI, and run drivers.

All timing reads the session clock (seconds since session start). The fast
driver advances it straight from the arrival schedule; the realtime driver
paces the same schedule against the wall clock, so both produce identical
event sequences for the same seed.
"""

from __future__ import annotations

import time as _time
from bisect import insort
from collections import deque
from dataclasses import dataclass, field
from datetime import date, datetime, time, timedelta
from typing import Callable, Iterable, Sequence

from .detect import (
    CanBandTrace,
    CycleRecord,
    DetectionConfig,
    LiftDetector,
    LiftRecord,
    MoveKind,
    PairedRep,
    RepetitionEvent,
    RepType,
    Stage,
    StationTrace,
    StsDetector,
    StreamingPairer,
    build_event,
)
from .goals import (
    GoalState,
    PromptKind,
    PromptRecord,
    Resolution,
    accept_prompt,
    issue_prompt,
    weekly_goal_check,
)
from .pressure import Calibrator, CausalSmoother, OccupancyTracker, frame_grid, split_feet
from .registry import IngestVerdict, Registry
from .scenario import ScenarioScript
from .simulate import (
    Arrival,
    CAN_BAND,
    FaultProfile,
    SimulationResult,
    apply_faults,
    synthesize_streams,
)
from .store import IngestError, MetricsStore, quality_of, symmetry_index
from .wire import (
    HeartbeatPayload,
    PeripheralId,
    PeripheralKind,
    PeripheralPacket,
    PressureFramePayload,
    decode_packet,
    encode_packet,
)

STAGE_CHANGED = "stage_changed"
REPETITION_LOGGED = "repetition_logged"
GOAL_PROMPT = "goal_prompt"
SENSOR_STATUS = "sensor_status"
DAILY_ROLLOVER = "daily_rollover"


class HubError(Exception):
    pass


@dataclass(frozen=True)
class HubConfig:
    reorder_horizon_s: float = 0.2
    sweep_interval_s: float = 0.5
    stale_timeout_s: float = 5.0
    depart_timeout_s: float = 60.0
    calibration_s: float = 3.0
    ring_size: int = 4096
    goal_comparator: str = "at_least"


@dataclass(frozen=True, slots=True)
class HubEvent:
    seq: int
    kind: str
    at: float            # session seconds of the triggering moment
    payload: dict


class EventBus:
    """Ordered event fanout with a bounded replay ring for reconnecting UIs."""

    def __init__(self, ring_size: int = 4096):
        self._ring: deque[HubEvent] = deque(maxlen=ring_size)
        self._seq = 0
        self._subscribers: list[Callable[[HubEvent], None]] = []

    def subscribe(self, fn: Callable[[HubEvent], None]) -> None:
        self._subscribers.append(fn)

    def emit(self, kind: str, at: float, payload: dict) -> HubEvent:
        event = HubEvent(self._seq, kind, at, payload)
        self._seq += 1
        self._ring.append(event)
        for fn in self._subscribers:
            fn(event)
        return event

    def replay_from(self, seq: int) -> list[HubEvent]:
        return [e for e in self._ring if e.seq >= seq]

    @property
    def next_seq(self) -> int:
        return self._seq


class ReorderBuffer:
    """Holds arrivals for a horizon, then releases them per peripheral in
    sequence order with that peripheral's receipt times reassigned in
    ascending order, merging peripherals by release time.

    A packet whose sequence number precedes anything already released from its
    peripheral missed the horizon and is dropped (and counted)."""

    def __init__(self, horizon_s: float):
        self.horizon_s = horizon_s
        self.late_drops = 0
        self._high = float("-inf")
        self._seqs: dict[PeripheralId, list[int]] = {}
        self._times: dict[PeripheralId, list[float]] = {}
        self._packets: dict[PeripheralId, dict[int, PeripheralPacket]] = {}
        self._last_released: dict[PeripheralId, int] = {}

    def add(self, arrival: Arrival) -> bool:
        pid = arrival.packet.id
        if arrival.packet.seq <= self._last_released.get(pid, -1):
            self.late_drops += 1
            return False
        self._high = max(self._high, arrival.at)
        insort(self._seqs.setdefault(pid, []), arrival.packet.seq)
        insort(self._times.setdefault(pid, []), arrival.at)
        self._packets.setdefault(pid, {})[arrival.packet.seq] = arrival.packet
        return True

    def release(self, watermark: float | None = None) -> list[tuple[float, PeripheralPacket]]:
        if watermark is None:
            watermark = self._high - self.horizon_s
        out: list[tuple[float, PeripheralPacket]] = []
        for pid in list(self._seqs):
            seqs = self._seqs[pid]
            times = self._times[pid]
            k = 0
            while k < len(times) and times[k] <= watermark:
                k += 1
            if k == 0:
                continue
            packets = self._packets[pid]
            for i in range(k):
                out.append((times[i], packets.pop(seqs[i])))
            self._last_released[pid] = seqs[k - 1]
            del seqs[:k]
            del times[:k]
        out.sort(key=lambda it: (it[0], it[1].id.kind, it[1].id.instance, it[1].seq))
        return out

    def flush(self) -> list[tuple[float, PeripheralPacket]]:
        return self.release(float("inf"))


@dataclass(slots=True)
class PausedInterval:
    start: float
    end: float | None = None


class StationPipeline:
    """Signal conditioning and sit-to-stand detection for one chair ensemble."""

    def __init__(self, detection: DetectionConfig, calibration_s: float):
        self.detection = detection
        self.calibration_s = calibration_s
        self._smoothers = {kind: CausalSmoother() for kind in (
            PeripheralKind.SEAT_CUSHION, PeripheralKind.FLOOR_MAT,
            PeripheralKind.ARMREST_LEFT, PeripheralKind.ARMREST_RIGHT,
        )}
        self._latest = {kind: 0.0 for kind in self._smoothers}
        self._mat_left = 0.0
        self._mat_right = 0.0
        self.calibrator = Calibrator(calibration_s)
        self.baselines = None
        self.occupancy: OccupancyTracker | None = None
        self.detector = StsDetector(detection)
        self.pairer = StreamingPairer(detection.double_gap_s)
        self.trace = StationTrace()
        self.last_symmetry: float | None = None

    @property
    def stage(self) -> Stage:
        return self.detector.stage

    def recalibrate(self) -> None:
        self.calibrator.reset()
        self.baselines = None
        self.occupancy = None
        self.detector = StsDetector(self.detection)

    def on_sample(self, t: float, packet: PeripheralPacket):
        grid = frame_grid(packet.payload)
        kind = packet.id.kind
        total = float(grid.sum())
        self._latest[kind] = self._smoothers[kind].update(total)
        if kind is PeripheralKind.FLOOR_MAT:
            split = split_feet(grid)
            self._mat_left = float(split.left.sum())
            self._mat_right = float(split.right.sum())

        if self.baselines is None:
            if kind in (PeripheralKind.SEAT_CUSHION, PeripheralKind.FLOOR_MAT):
                self.baselines = self.calibrator.feed(
                    t,
                    self._latest[PeripheralKind.SEAT_CUSHION],
                    self._latest[PeripheralKind.FLOOR_MAT],
                )
                if self.baselines is not None:
                    self.occupancy = OccupancyTracker(
                        self.detection.occupancy_on_pct / 100.0,
                        self.detection.occupancy_off_pct / 100.0,
                        start=t,
                    )
            return None

        b = self.baselines
        cushion_frac = self._latest[PeripheralKind.SEAT_CUSHION] / b.cushion
        mat_frac = self._latest[PeripheralKind.FLOOR_MAT] / b.body_weight
        arm_l = self._latest[PeripheralKind.ARMREST_LEFT] / b.body_weight
        arm_r = self._latest[PeripheralKind.ARMREST_RIGHT] / b.body_weight
        occ, transitioned = self.occupancy.step(cushion_frac, t)
        outcome = self.detector.step(
            t, cushion_frac, occ.loaded, transitioned, mat_frac,
            arm_l, arm_r, self._mat_left, self._mat_right,
        )
        self.trace.append(
            t, cushion_frac, occ.loaded, transitioned, mat_frac,
            arm_l, arm_r, self._mat_left, self._mat_right,
        )
        if outcome.record is not None:
            self.last_symmetry = symmetry_index(
                outcome.record.left_integral, outcome.record.right_integral
            )
        return outcome


class CanBandPipeline:
    def __init__(self, detection: DetectionConfig):
        self.detector = LiftDetector(detection)
        self.pairer = StreamingPairer(detection.double_gap_s)
        self.trace = CanBandTrace()

    def on_sample(self, t: float, packet: PeripheralPacket):
        payload = packet.payload
        az = payload.accel[2]
        self.trace.append(t, payload.grip_n, az)
        return self.detector.step(t, payload.grip_n, az)

    def potential_next_start(self, now: float) -> float:
        from .detect import LiftPhase

        if self.detector.phase is not LiftPhase.IDLE:
            return self.detector._start_t
        return now


def _signature(rep: PairedRep) -> str:
    first = rep.records[0]
    if isinstance(first, CycleRecord):
        parts = ["seat_cushion:0", "floor_mat:0"]
        if any(r.lean_left for r in rep.records):
            parts.append("armrest_left:0")
        if any(r.lean_right for r in rep.records):
            parts.append("armrest_right:0")
        return "+".join(parts)
    return "can_band:0"


class Hub:
    """One session's orchestrator: ingest -> order -> detect -> log -> feed UI."""

    def __init__(
        self,
        *,
        detection: DetectionConfig | None = None,
        hub_config: HubConfig | None = None,
        store: MetricsStore | None = None,
        session_start: datetime | None = None,
        goal_state: GoalState | None = None,
    ):
        self.detection = detection or DetectionConfig()
        self.config = hub_config or HubConfig()
        self.store = store
        self.session_start = session_start or datetime(2026, 1, 5, 9, 0, 0)
        self.goal_state = goal_state or GoalState()
        self.registry = Registry(
            self.config.stale_timeout_s, self.config.depart_timeout_s
        )
        self.buffer = ReorderBuffer(self.config.reorder_horizon_s)
        self.bus = EventBus(self.config.ring_size)
        self.station = StationPipeline(self.detection, self.config.calibration_s)
        self.canband = CanBandPipeline(self.detection)
        self.now = 0.0
        self.duplicates = 0
        self.paused: list[PausedInterval] = []
        self.masked = False
        self.today = {"s": 0, "d": 0, "s_cb": 0, "d_cb": 0}
        self.logged_events: list[RepetitionEvent] = []
        self.store_alerts = 0
        self._next_sweep = self.config.sweep_interval_s

    # -- session state -------------------------------------------------------

    @property
    def is_paused(self) -> bool:
        return bool(self.paused) and self.paused[-1].end is None

    def paused_at(self, t: float) -> bool:
        return any(p.start <= t and (p.end is None or t < p.end) for p in self.paused)

    @property
    def mode(self) -> str:
        if self.is_paused:
            return "masked+paused" if self.masked else "paused"
        return "masked+active" if self.masked else "active"

    def snapshot(self) -> dict:
        metrics = self.store.day(self.session_start.date()) if self.store else None
        pending = self.goal_state.pending_prompt
        counts: dict[str, int | None] = dict(self.today)
        if self.masked:
            counts = {k: None for k in counts}
        return {
            "mode": self.mode,
            "stage": self.station.stage.name.lower(),
            "goal_g": self.goal_state.g,
            "today": counts,
            "masked": self.masked,
            "paused": self.is_paused,
            "pending_prompt": {
                "kind": pending.kind.value,
                "n": pending.n,
                "message": pending.message,
            } if pending else None,
            "stations": [
                {
                    "peripheral": str(e.id),
                    "status": e.status.value,
                    "last_seq": e.last_seq,
                    "last_seen": e.last_seen,
                }
                for e in self.registry.snapshot()
            ],
            "late_drops": self.buffer.late_drops,
            "duplicates": self.duplicates,
            "next_event_seq": self.bus.next_seq,
            "date": self.session_start.date().isoformat(),
            "mean_double_time_s": (
                quality_of(metrics).mean_double_time_s if metrics else None
            ),
            "symmetry_last": self.station.last_symmetry,
        }

    # -- ingest ---------------------------------------------------------------

    def ingest_bytes(self, data: bytes, at: float) -> None:
        self.ingest(Arrival(at, decode_packet(data)))

    def ingest(self, arrival: Arrival) -> None:
        self.now = max(self.now, arrival.at)
        verdict, transition = self.registry.ingest(arrival.packet, arrival.at)
        if transition is not None:
            self.bus.emit(SENSOR_STATUS, arrival.at, {
                "peripheral": str(transition.id),
                "old": transition.old.value if transition.old else None,
                "new": transition.new.value,
            })
        if verdict is IngestVerdict.DUPLICATE:
            self.duplicates += 1
            return
        if isinstance(arrival.packet.payload, HeartbeatPayload):
            return
        if self.buffer.add(arrival):
            for t, packet in self.buffer.release():
                self._process(t, packet)

    def tick(self, now: float) -> None:
        self.now = max(self.now, now)
        while self._next_sweep <= self.now:
            for tr in self.registry.sweep(self._next_sweep):
                self.bus.emit(SENSOR_STATUS, self._next_sweep, {
                    "peripheral": str(tr.id),
                    "old": tr.old.value if tr.old else None,
                    "new": tr.new.value,
                })
            self._next_sweep += self.config.sweep_interval_s
        self._pairer_ticks(self.now)

    def _pairer_ticks(self, now: float) -> None:
        for rep in self.station.pairer.tick(
            now, self.station.detector.potential_next_start(now)
        ):
            self._log_rep(rep, now)
        for rep in self.canband.pairer.tick(
            now, self.canband.potential_next_start(now)
        ):
            self._log_rep(rep, now)

    def _process(self, t: float, packet: PeripheralPacket) -> None:
        if packet.id.kind is PeripheralKind.CAN_BAND:
            outcome = self.canband.on_sample(t, packet)
            if outcome.record is not None:
                for rep in self.canband.pairer.add(outcome.record):
                    self._log_rep(rep, t)
            return
        if not isinstance(packet.payload, PressureFramePayload):
            return
        outcome = self.station.on_sample(t, packet)
        if outcome is None:
            return
        for change in outcome.changes:
            self.bus.emit(STAGE_CHANGED, change.at, {
                "station": 0,
                "stage": change.new.name.lower(),
                "stage_index": change.new.value,
                "previous": change.old.name.lower(),
            })
        if outcome.record is not None:
            for rep in self.station.pairer.add(outcome.record):
                self._log_rep(rep, t)

    def _log_rep(self, rep: PairedRep, at: float) -> None:
        event = build_event(rep, _signature(rep))
        if self.paused_at(event.occurred_at_s):
            return  # logging suspended; the live display already walked the stages
        ts = self.session_start + timedelta(seconds=event.occurred_at_s)
        if self.store is not None:
            try:
                self.store.ingest_event(event, ts)
                self.store.checkpoint()
            except IngestError as e:
                self.store_alerts += 1
                self.bus.emit(SENSOR_STATUS, at, {
                    "peripheral": "store",
                    "old": "active",
                    "new": "failed",
                    "error": str(e),
                })
        self.logged_events.append(event)
        if event.kind is MoveKind.SIT_TO_STAND:
            key = "d" if event.rep_type is RepType.DOUBLE else "s"
        else:
            key = "d_cb" if event.rep_type is RepType.DOUBLE else "s_cb"
        self.today[key] += 1
        payload = {
            "kind": event.kind.value,
            "rep_type": event.rep_type.value,
            "duration_s": event.duration_s,
            "occurred_at": ts.isoformat(),
            "sensor_signature": event.sensor_signature,
            "balance_leaning": event.balance_leaning.value if event.balance_leaning else None,
            "lift_metrics": {
                "distance_m": event.lift_metrics.distance_m,
                "grip_avg_n": event.lift_metrics.grip_avg_n,
                "grip_peak_n": event.lift_metrics.grip_peak_n,
            } if event.lift_metrics else None,
            "masked": self.masked,
        }
        if not self.masked:
            payload["today"] = dict(self.today)
            payload["goal_g"] = self.goal_state.g
        self.bus.emit(REPETITION_LOGGED, at, payload)

    # -- commands ---------------------------------------------------------------

    def command(self, name: str, value: int | None = None) -> dict:
        now = self.now
        if name == "pause":
            if not self.is_paused:
                self.paused.append(PausedInterval(start=now))
        elif name == "resume":
            if self.is_paused:
                self.paused[-1].end = now
        elif name == "mask_on":
            self.masked = True
        elif name == "mask_off":
            self.masked = False
        elif name == "accept_goal":
            self.goal_state, _ = accept_prompt(
                self.goal_state, Resolution.ACCEPTED, value
            )
        elif name == "decline_goal":
            self.goal_state, _ = accept_prompt(self.goal_state, Resolution.DECLINED)
        elif name == "recalibrate":
            self.station.recalibrate()
        else:
            raise HubError(f"unknown command '{name}'")
        return self.snapshot()

    # -- progression ---------------------------------------------------------------

    def day_rollover(self, day: date) -> None:
        self.bus.emit(DAILY_ROLLOVER, self.now, {"date": day.isoformat()})

    def weekly_check(self, end_date: date) -> PromptRecord:
        if self.store is None:
            raise HubError("weekly check needs a metrics store")
        window = self.store.weekly_window(end_date)
        n, prompt = weekly_goal_check(
            self.goal_state.g, window, end_date,
            comparator=self.config.goal_comparator,
        )
        self.goal_state = issue_prompt(self.goal_state, prompt, end_date)
        self.bus.emit(GOAL_PROMPT, self.now, {
            "kind": prompt.kind.value,
            "n": n,
            "g": self.goal_state.g,
            "message": prompt.message,
            "window": window,
            "week_ending": end_date.isoformat(),
        })
        return prompt

    # -- teardown ---------------------------------------------------------------

    def finish(self, end_t: float | None = None) -> None:
        end = end_t if end_t is not None else self.now
        self.now = max(self.now, end)
        for t, packet in self.buffer.flush():
            self._process(t, packet)
        self.tick(self.now)
        record = self.station.detector.flush(self.now)
        if record is not None:
            for rep in self.station.pairer.add(record):
                self._log_rep(rep, self.now)
        for rep in self.station.pairer.flush():
            self._log_rep(rep, self.now)
        for rep in self.canband.pairer.flush():
            self._log_rep(rep, self.now)
        if self.store is not None:
            self.store.checkpoint()


# --- drivers -----------------------------------------------------------------


@dataclass
class RunResult:
    hub: Hub
    sim: SimulationResult
    events: list[HubEvent]
    rep_events: list[RepetitionEvent]
    latencies_ms: list[float] = field(default_factory=list)

    @property
    def counts(self) -> dict:
        return dict(self.hub.today)


CommandScript = Sequence[tuple[float, str, int | None]]


def run_session(
    script: ScenarioScript,
    *,
    seed: int = 0,
    faults: FaultProfile | None = None,
    detection: DetectionConfig | None = None,
    hub_config: HubConfig | None = None,
    store: MetricsStore | None = None,
    session_start: datetime | None = None,
    goal_state: GoalState | None = None,
    realtime: bool = False,
    wire_roundtrip: bool = True,
    commands: CommandScript = (),
    on_event: Callable[[HubEvent], None] | None = None,
    sim: SimulationResult | None = None,
    fault_seed: int | None = None,
) -> RunResult:
    """Run one scenario end to end through the hub; deterministic given seeds."""
    if sim is None:
        sim = synthesize_streams(script, seed, detection)
    arrivals = apply_faults(
        sim.streams, faults or FaultProfile(),
        fault_seed if fault_seed is not None else seed,
    )
    hub = Hub(
        detection=detection,
        hub_config=hub_config,
        store=store,
        session_start=session_start,
        goal_state=goal_state,
    )
    events: list[HubEvent] = []
    latencies: list[float] = []
    wall_start = _time.perf_counter()

    def collect(e: HubEvent) -> None:
        events.append(e)
        if realtime and e.kind in (STAGE_CHANGED, REPETITION_LOGGED):
            latencies.append(((_time.perf_counter() - wall_start) - e.at) * 1000.0)
        if on_event is not None:
            on_event(e)

    hub.bus.subscribe(collect)

    pending_commands = sorted(commands, key=lambda c: c[0])
    ci = 0
    for arrival in arrivals:
        while ci < len(pending_commands) and pending_commands[ci][0] <= arrival.at:
            t_cmd, name, value = pending_commands[ci]
            hub.tick(t_cmd)
            hub.command(name, value)
            ci += 1
        if realtime:
            while (_time.perf_counter() - wall_start) < arrival.at:
                _time.sleep(max(min(arrival.at - (_time.perf_counter() - wall_start), 0.005), 0.0))
        hub.tick(arrival.at)
        if wire_roundtrip:
            hub.ingest_bytes(encode_packet(arrival.packet), arrival.at)
        else:
            hub.ingest(arrival)
    while ci < len(pending_commands):
        t_cmd, name, value = pending_commands[ci]
        hub.tick(t_cmd)
        hub.command(name, value)
        ci += 1
    end_t = max(sim.script.total_duration_s, hub.now)
    hub.finish(end_t)
    return RunResult(hub=hub, sim=sim, events=events,
                     rep_events=list(hub.logged_events), latencies_ms=latencies)


@dataclass(frozen=True)
class DayPlan:
    day: date
    script: ScenarioScript
    seed: int
    faults: FaultProfile | None = None
    commands: CommandScript = ()


@dataclass
class MultiDayResult:
    runs: list[RunResult]
    goal_state: GoalState
    prompts: list[PromptRecord]
    store: MetricsStore


def run_days(
    plans: Iterable[DayPlan],
    *,
    detection: DetectionConfig | None = None,
    hub_config: HubConfig | None = None,
    store: MetricsStore,
    goal_state: GoalState | None = None,
    start_time: time = time(9, 0),
    wire_roundtrip: bool = True,
    on_event: Callable[[HubEvent], None] | None = None,
) -> MultiDayResult:
    """Drive consecutive virtual days through one store and goal state,
    running the weekly progression check every seventh day of activity."""
    goal = goal_state or GoalState()
    runs: list[RunResult] = []
    prompts: list[PromptRecord] = []
    first_activity: date | None = None
    for plan in plans:
        result = run_session(
            plan.script,
            seed=plan.seed,
            faults=plan.faults,
            detection=detection,
            hub_config=hub_config,
            store=store,
            session_start=datetime.combine(plan.day, start_time),
            goal_state=goal,
            commands=plan.commands,
            wire_roundtrip=wire_roundtrip,
            on_event=on_event,
        )
        goal = result.hub.goal_state
        if first_activity is None and result.rep_events:
            first_activity = plan.day
        result.hub.day_rollover(plan.day)
        if first_activity is not None and (plan.day - first_activity).days % 7 == 6:
            prompts.append(result.hub.weekly_check(plan.day))
            goal = result.hub.goal_state
        runs.append(result)
    return MultiDayResult(runs=runs, goal_state=goal, prompts=prompts, store=store)
