"""Repetition detection: sit-to-stand stage machine, lift phase machine, pairing.

The streaming detectors consume conditioned signals sample by sample. The
offline segmenters at the bottom of this module re-derive the same cycles from
complete traces with plain forward scans; they exist as independent oracles and
must never share state-machine code with the streaming path.

A cycle's measured boundaries are anchored where the cushion signal leaves and
re-enters a near-baseline band (default 95%), found by backtracking from the
unload trigger and by waiting for the reload to settle. Stage transitions
themselves fire on the configured unload/reload thresholds.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

GRAVITY = 9.81


class DetectionError(Exception):
    pass


@dataclass(frozen=True)
class DetectionConfig:
    # sit-to-stand criteria
    min_cycle_s: float = 1.5
    max_cycle_s: float = 20.0           # calibrated within a 15-20 s band
    seat_unload_pct: float = 10.0       # % of seated cushion baseline
    mat_load_pct: float = 70.0          # % of body-weight estimate
    hold_window_s: float = 1.0          # bounded to [0.5, 2.0]
    double_gap_s: float = 10.0
    armrest_lean_pct: float = 15.0      # % of body-weight estimate
    # cycle boundary anchoring and occupancy hysteresis
    onset_settle_pct: float = 95.0      # near-baseline band for start/end anchors
    settle_timeout_s: float = 3.0
    occupancy_on_pct: float = 30.0
    occupancy_off_pct: float = 15.0
    # can-band lift criteria
    grip_threshold_n: float = 5.0
    lift_accel_band: float = 0.4        # m/s^2 above/below gravity for motion
    rest_band: float = 0.15             # |a - g| stillness band
    hold_settle_s: float = 0.25

    def __post_init__(self):
        if not 0 < self.min_cycle_s < self.max_cycle_s:
            raise DetectionError("need 0 < min_cycle_s < max_cycle_s")
        if not 0.5 <= self.hold_window_s <= 2.0:
            raise DetectionError("hold_window_s must lie in [0.5, 2.0]")
        for name in (
            "seat_unload_pct", "mat_load_pct", "armrest_lean_pct",
            "onset_settle_pct", "occupancy_on_pct", "occupancy_off_pct",
        ):
            v = getattr(self, name)
            if not 0 < v < 100:
                raise DetectionError(f"{name} must be a percentage in (0, 100)")
        if self.occupancy_on_pct <= self.occupancy_off_pct:
            raise DetectionError("occupancy_on_pct must exceed occupancy_off_pct")
        if self.double_gap_s <= 0 or self.grip_threshold_n <= 0:
            raise DetectionError("double_gap_s and grip_threshold_n must be positive")

    # fraction views of the percentage knobs
    @property
    def seat_unload(self) -> float:
        return self.seat_unload_pct / 100.0

    @property
    def mat_load(self) -> float:
        return self.mat_load_pct / 100.0

    @property
    def armrest_lean(self) -> float:
        return self.armrest_lean_pct / 100.0

    @property
    def onset_settle(self) -> float:
        return self.onset_settle_pct / 100.0


class Stage(Enum):
    SEATED = 0
    RISING = 1
    STANDING = 2
    LOWERING = 3
    COMPLETE = 4


class LiftPhase(Enum):
    IDLE = 0
    LIFT = 1
    HOLD = 2
    RETURN = 3


class RepType(Enum):
    SINGLE = "single"
    DOUBLE = "double"


class MoveKind(Enum):
    SIT_TO_STAND = "sit_to_stand"
    LIFT = "lift"


class Leaning(Enum):
    NONE = "none"
    LEFT = "left"
    RIGHT = "right"
    BOTH = "both"


@dataclass(frozen=True, slots=True)
class CycleRecord:
    start: float            # unload onset anchor
    end: float              # reload settle anchor
    trigger_t: float        # when the unload threshold fired
    lean_left: bool
    lean_right: bool
    left_integral: float    # per-foot mat load integral over the rising span
    right_integral: float

    @property
    def duration_s(self) -> float:
        return self.end - self.start

    @property
    def leaning(self) -> Leaning:
        if self.lean_left and self.lean_right:
            return Leaning.BOTH
        if self.lean_left:
            return Leaning.LEFT
        if self.lean_right:
            return Leaning.RIGHT
        return Leaning.NONE


@dataclass(frozen=True, slots=True)
class LiftRecord:
    start: float
    end: float
    distance_m: float
    grip_avg_n: float
    grip_peak_n: float

    @property
    def duration_s(self) -> float:
        return self.end - self.start


@dataclass(frozen=True, slots=True)
class LiftMetrics:
    distance_m: float
    grip_avg_n: float
    grip_peak_n: float


@dataclass(frozen=True, slots=True)
class RepetitionEvent:
    rep_type: RepType
    kind: MoveKind
    duration_s: float
    sensor_signature: str
    occurred_at_s: float            # session-relative seconds; hub maps to wall time
    balance_leaning: Leaning | None
    lift_metrics: LiftMetrics | None

    def __post_init__(self):
        if self.kind is MoveKind.SIT_TO_STAND and self.lift_metrics is not None:
            raise DetectionError("sit-to-stand events carry no lift metrics")
        if self.kind is MoveKind.LIFT and self.balance_leaning is not None:
            raise DetectionError("lift events carry no leaning flags")


@dataclass(frozen=True, slots=True)
class StageChange:
    at: float
    old: Stage
    new: Stage


@dataclass(slots=True)
class StsOutcome:
    changes: list[StageChange]
    record: CycleRecord | None


class StsDetector:
    """Streaming five-stage sit-to-stand machine for one station.

    Legal edges: SEATED->RISING->STANDING->LOWERING->COMPLETE->SEATED plus the
    abort edges RISING->SEATED and LOWERING->STANDING. Invalid motion never
    yields a record.
    """

    def __init__(self, config: DetectionConfig, history_len: int = 1024):
        self.config = config
        self.stage = Stage.SEATED
        self.stage_entered = 0.0
        self._history: deque[tuple[float, float]] = deque(maxlen=history_len)
        self._prev_t: float | None = None
        self._last_above_onset: float = 0.0
        # in-flight cycle bookkeeping
        self._onset_t = 0.0
        self._trigger_t = 0.0
        self._mat_above_since: float | None = None
        self._lean_left = False
        self._lean_right = False
        self._left_integral = 0.0
        self._right_integral = 0.0
        self._reload_t = 0.0

    def potential_next_start(self, now: float) -> float:
        """Earliest start a new (or in-flight) cycle could claim.

        The pairer must not finalize a single while a successor could still
        backdate its onset into the double window.
        """
        if self.stage is not Stage.SEATED:
            return self._onset_t
        return self._last_above_onset

    def _backtrack_onset(self, trigger_t: float) -> float:
        threshold = self.config.onset_settle
        for t, frac in reversed(self._history):
            if frac >= threshold:
                return t
        return self._history[0][0] if self._history else trigger_t

    def _enter(self, stage: Stage, now: float, changes: list[StageChange]) -> None:
        changes.append(StageChange(now, self.stage, stage))
        self.stage = stage
        self.stage_entered = now

    def step(
        self,
        now: float,
        cushion_frac: float,
        occ_loaded: bool,
        occ_transition: bool,
        mat_frac: float,
        arm_left_frac: float,
        arm_right_frac: float,
        mat_left_load: float,
        mat_right_load: float,
    ) -> StsOutcome:
        cfg = self.config
        changes: list[StageChange] = []
        record: CycleRecord | None = None
        dt = 0.0 if self._prev_t is None else now - self._prev_t
        self._prev_t = now
        self._history.append((now, cushion_frac))
        if cushion_frac >= cfg.onset_settle:
            self._last_above_onset = now

        if self.stage is Stage.SEATED:
            if cushion_frac < cfg.seat_unload:
                self._trigger_t = now
                self._onset_t = self._backtrack_onset(now)
                self._mat_above_since = None
                self._lean_left = False
                self._lean_right = False
                self._left_integral = 0.0
                self._right_integral = 0.0
                self._enter(Stage.RISING, now, changes)

        elif self.stage is Stage.RISING:
            self._accumulate(arm_left_frac, arm_right_frac, mat_left_load, mat_right_load, dt)
            if occ_transition and occ_loaded:
                # re-seated before a sustained stand: repositioning, not a rise
                self._enter(Stage.SEATED, now, changes)
            elif now - self._trigger_t > cfg.max_cycle_s:
                self._enter(Stage.SEATED, now, changes)
            elif mat_frac > cfg.mat_load:
                if self._mat_above_since is None:
                    self._mat_above_since = now
                if now - self._mat_above_since >= cfg.hold_window_s:
                    self._enter(Stage.STANDING, now, changes)
            else:
                self._mat_above_since = None

        elif self.stage is Stage.STANDING:
            if cushion_frac > cfg.seat_unload:
                self._enter(Stage.LOWERING, now, changes)

        elif self.stage is Stage.LOWERING:
            self._accumulate(arm_left_frac, arm_right_frac, mat_left_load, mat_right_load, dt)
            if cushion_frac < cfg.seat_unload:
                self._enter(Stage.STANDING, now, changes)
            elif occ_transition and occ_loaded:
                self._reload_t = now
                self._enter(Stage.COMPLETE, now, changes)

        elif self.stage is Stage.COMPLETE:
            if occ_transition and not occ_loaded:
                self._enter(Stage.STANDING, now, changes)
            elif cushion_frac >= cfg.onset_settle:
                record = self._finalize(now)
                self._enter(Stage.SEATED, now, changes)
            elif now - self._reload_t > cfg.settle_timeout_s:
                record = self._finalize(self._reload_t)
                self._enter(Stage.SEATED, now, changes)

        return StsOutcome(changes, record)

    def _accumulate(self, arm_l: float, arm_r: float, mat_l: float, mat_r: float, dt: float) -> None:
        lean = self.config.armrest_lean
        if arm_l > lean:
            self._lean_left = True
        if arm_r > lean:
            self._lean_right = True
        self._left_integral += mat_l * dt
        self._right_integral += mat_r * dt

    def _finalize(self, end: float) -> CycleRecord | None:
        duration = end - self._onset_t
        if not self.config.min_cycle_s <= duration <= self.config.max_cycle_s:
            return None
        return CycleRecord(
            start=self._onset_t,
            end=end,
            trigger_t=self._trigger_t,
            lean_left=self._lean_left,
            lean_right=self._lean_right,
            left_integral=self._left_integral,
            right_integral=self._right_integral,
        )

    def flush(self, now: float) -> CycleRecord | None:
        """End of session: a cycle stuck settling still counts at its reload time."""
        if self.stage is Stage.COMPLETE:
            record = self._finalize(self._reload_t)
            self.stage = Stage.SEATED
            return record
        return None


@dataclass(slots=True)
class LiftOutcome:
    changes: list[tuple[float, LiftPhase, LiftPhase]]
    record: LiftRecord | None


class LiftDetector:
    """Streaming lift-hold-return phase machine for one can band.

    Displacement is the trapezoid double integral of vertical acceleration
    minus gravity, with a zero-velocity reset when the hold phase settles.
    """

    def __init__(self, config: DetectionConfig):
        self.config = config
        self.phase = LiftPhase.IDLE
        self._prev_t: float | None = None
        self._prev_a = 0.0
        self._start_t = 0.0
        self._vel = 0.0
        self._disp = 0.0
        self._max_disp = 0.0
        self._grip_sum = 0.0
        self._grip_count = 0
        self._grip_peak = 0.0
        self._still_since: float | None = None

    def _change(self, phase: LiftPhase, now: float, changes: list) -> None:
        changes.append((now, self.phase, phase))
        self.phase = phase

    def _integrate(self, a: float, dt: float) -> None:
        self._vel += 0.5 * (self._prev_a + a) * dt
        self._disp += self._vel * dt
        self._max_disp = max(self._max_disp, abs(self._disp))

    def _grip_update(self, grip: float) -> None:
        self._grip_sum += grip
        self._grip_count += 1
        self._grip_peak = max(self._grip_peak, grip)

    def step(self, now: float, grip_n: float, accel_z: float) -> LiftOutcome:
        cfg = self.config
        changes: list[tuple[float, LiftPhase, LiftPhase]] = []
        record: LiftRecord | None = None
        a = accel_z - GRAVITY
        dt = 0.0 if self._prev_t is None else now - self._prev_t

        if self.phase is LiftPhase.IDLE:
            if grip_n > cfg.grip_threshold_n and a > cfg.lift_accel_band:
                self._start_t = now
                self._vel = 0.0
                self._disp = 0.0
                self._max_disp = 0.0
                self._grip_sum = 0.0
                self._grip_count = 0
                self._grip_peak = 0.0
                self._still_since = None
                self._grip_update(grip_n)
                self._change(LiftPhase.LIFT, now, changes)

        elif self.phase is LiftPhase.LIFT:
            self._grip_update(grip_n)
            self._integrate(a, dt)
            if grip_n < cfg.grip_threshold_n:
                self._change(LiftPhase.IDLE, now, changes)
            elif abs(a) < cfg.rest_band:
                if self._still_since is None:
                    self._still_since = now
                if now - self._still_since >= cfg.hold_settle_s:
                    self._vel = 0.0  # zero-velocity update while holding
                    self._change(LiftPhase.HOLD, now, changes)
            else:
                self._still_since = None

        elif self.phase is LiftPhase.HOLD:
            self._grip_update(grip_n)
            if grip_n < cfg.grip_threshold_n:
                self._change(LiftPhase.IDLE, now, changes)
            elif a < -cfg.lift_accel_band:
                self._change(LiftPhase.RETURN, now, changes)

        elif self.phase is LiftPhase.RETURN:
            self._grip_update(grip_n)
            self._integrate(a, dt)
            if grip_n < cfg.grip_threshold_n:
                record = LiftRecord(
                    start=self._start_t,
                    end=now,
                    distance_m=self._max_disp,
                    grip_avg_n=self._grip_sum / max(self._grip_count, 1),
                    grip_peak_n=self._grip_peak,
                )
                self._change(LiftPhase.IDLE, now, changes)

        self._prev_t = now
        self._prev_a = a
        return LiftOutcome(changes, record)


# --- pairing -----------------------------------------------------------------

Record = CycleRecord | LiftRecord


@dataclass(frozen=True, slots=True)
class PairedRep:
    rep_type: RepType
    records: tuple[Record, ...]

    @property
    def start(self) -> float:
        return self.records[0].start

    @property
    def end(self) -> float:
        return self.records[-1].end

    @property
    def duration_s(self) -> float:
        return sum(r.duration_s for r in self.records)


def pair_records(records: list[Record], double_gap_s: float) -> list[PairedRep]:
    """Greedy left-to-right, non-overlapping pairing of chronological records."""
    paired: list[PairedRep] = []
    i = 0
    while i < len(records):
        if (
            i + 1 < len(records)
            and records[i + 1].start - records[i].end <= double_gap_s
        ):
            paired.append(PairedRep(RepType.DOUBLE, (records[i], records[i + 1])))
            i += 2
        else:
            paired.append(PairedRep(RepType.SINGLE, (records[i],)))
            i += 1
    return paired


class StreamingPairer:
    """Incremental equivalent of pair_records for a live record stream."""

    def __init__(self, double_gap_s: float):
        self.gap = double_gap_s
        self._pending: Record | None = None

    def add(self, record: Record) -> list[PairedRep]:
        if self._pending is None:
            self._pending = record
            return []
        if record.start - self._pending.end <= self.gap:
            rep = PairedRep(RepType.DOUBLE, (self._pending, record))
            self._pending = None
            return [rep]
        rep = PairedRep(RepType.SINGLE, (self._pending,))
        self._pending = record
        return [rep]

    def tick(self, now: float, potential_next_start: float) -> list[PairedRep]:
        """Finalize a pending single once no successor can reach back into the window."""
        if self._pending is None:
            return []
        expiry = self._pending.end + self.gap
        if now > expiry and potential_next_start > expiry:
            rep = PairedRep(RepType.SINGLE, (self._pending,))
            self._pending = None
            return [rep]
        return []

    def flush(self) -> list[PairedRep]:
        if self._pending is None:
            return []
        rep = PairedRep(RepType.SINGLE, (self._pending,))
        self._pending = None
        return [rep]


def build_event(rep: PairedRep, signature: str) -> RepetitionEvent:
    first = rep.records[0]
    if isinstance(first, CycleRecord):
        lean_left = any(r.lean_left for r in rep.records)
        lean_right = any(r.lean_right for r in rep.records)
        leaning = (
            Leaning.BOTH if lean_left and lean_right
            else Leaning.LEFT if lean_left
            else Leaning.RIGHT if lean_right
            else Leaning.NONE
        )
        return RepetitionEvent(
            rep_type=rep.rep_type,
            kind=MoveKind.SIT_TO_STAND,
            duration_s=rep.duration_s,
            sensor_signature=signature,
            occurred_at_s=rep.end,
            balance_leaning=leaning,
            lift_metrics=None,
        )
    records: tuple[LiftRecord, ...] = rep.records  # type: ignore[assignment]
    metrics = LiftMetrics(
        distance_m=math.fsum(r.distance_m for r in records) / len(records),
        grip_avg_n=math.fsum(r.grip_avg_n for r in records) / len(records),
        grip_peak_n=max(r.grip_peak_n for r in records),
    )
    return RepetitionEvent(
        rep_type=rep.rep_type,
        kind=MoveKind.LIFT,
        duration_s=rep.duration_s,
        sensor_signature=signature,
        occurred_at_s=rep.end,
        balance_leaning=None,
        lift_metrics=metrics,
    )


# --- offline oracles ----------------------------------------------------------


@dataclass
class StationTrace:
    """Conditioned per-sample signals for one station, as fed to the detector."""

    t: list[float] = field(default_factory=list)
    cushion_frac: list[float] = field(default_factory=list)
    occ_loaded: list[bool] = field(default_factory=list)
    occ_transition: list[bool] = field(default_factory=list)
    mat_frac: list[float] = field(default_factory=list)
    arm_left_frac: list[float] = field(default_factory=list)
    arm_right_frac: list[float] = field(default_factory=list)
    mat_left_load: list[float] = field(default_factory=list)
    mat_right_load: list[float] = field(default_factory=list)

    def append(self, t, cushion_frac, occ_loaded, occ_transition, mat_frac,
               arm_l, arm_r, mat_l, mat_r) -> None:
        self.t.append(t)
        self.cushion_frac.append(cushion_frac)
        self.occ_loaded.append(occ_loaded)
        self.occ_transition.append(occ_transition)
        self.mat_frac.append(mat_frac)
        self.arm_left_frac.append(arm_l)
        self.arm_right_frac.append(arm_r)
        self.mat_left_load.append(mat_l)
        self.mat_right_load.append(mat_r)

    def __len__(self) -> int:
        return len(self.t)


@dataclass
class CanBandTrace:
    t: list[float] = field(default_factory=list)
    grip_n: list[float] = field(default_factory=list)
    accel_z: list[float] = field(default_factory=list)

    def append(self, t, grip_n, accel_z) -> None:
        self.t.append(t)
        self.grip_n.append(grip_n)
        self.accel_z.append(accel_z)

    def __len__(self) -> int:
        return len(self.t)


def offline_segment(trace: StationTrace, config: DetectionConfig) -> list[CycleRecord]:
    """Exhaustive forward scan over a complete trace applying the same criteria
    as the streaming machine; the independent ground truth for equivalence tests."""
    cfg = config
    n = len(trace)
    t = trace.t
    frac = trace.cushion_frac
    occ = trace.occ_loaded
    trans = trace.occ_transition
    mat = trace.mat_frac
    records: list[CycleRecord] = []
    k = 0
    while k < n:
        if frac[k] >= cfg.seat_unload:
            k += 1
            continue
        # trigger at k: backtrack for the onset anchor
        trigger_t = t[k]
        onset = t[0]
        for j in range(k - 1, -1, -1):
            if frac[j] >= cfg.onset_settle:
                onset = t[j]
                break
        lean_left = False
        lean_right = False
        left_int = 0.0
        right_int = 0.0

        def accumulate(i: int) -> None:
            nonlocal lean_left, lean_right, left_int, right_int
            if trace.arm_left_frac[i] > cfg.armrest_lean:
                lean_left = True
            if trace.arm_right_frac[i] > cfg.armrest_lean:
                lean_right = True
            dt = t[i] - t[i - 1] if i > 0 else 0.0
            left_int += trace.mat_left_load[i] * dt
            right_int += trace.mat_right_load[i] * dt

        # rising: wait for the mat hold, abort on re-seat or timeout
        i = k + 1
        above_since: float | None = None
        standing_at = None
        aborted_at = None
        while i < n:
            accumulate(i)
            if trans[i] and occ[i]:
                aborted_at = i
                break
            if t[i] - trigger_t > cfg.max_cycle_s:
                aborted_at = i
                break
            if mat[i] > cfg.mat_load:
                if above_since is None:
                    above_since = t[i]
                if t[i] - above_since >= cfg.hold_window_s:
                    standing_at = i
                    break
            else:
                above_since = None
            i += 1
        if standing_at is None:
            k = (aborted_at if aborted_at is not None else n) + 1
            continue

        # standing / lowering / settling, with the stand-back-up abort edge and
        # seat bounces sending the scan back to standing any number of times
        i = standing_at + 1
        reload_at: int | None = None
        lowering = False
        end = None
        while i < n:
            if reload_at is None:
                if not lowering:
                    if frac[i] > cfg.seat_unload:
                        lowering = True
                else:
                    accumulate(i)
                    if frac[i] < cfg.seat_unload:
                        lowering = False
                    elif trans[i] and occ[i]:
                        reload_at = i
            else:
                if trans[i] and not occ[i]:
                    reload_at = None
                    lowering = False
                elif frac[i] >= cfg.onset_settle:
                    end = t[i]
                    break
                elif t[i] - t[reload_at] > cfg.settle_timeout_s:
                    end = t[reload_at]
                    break
            i += 1
        if end is None:
            if reload_at is None:
                break  # trace ended mid-cycle: nothing to record
            end = t[reload_at]  # trace ended while settling
            i = n
        duration = end - onset
        if cfg.min_cycle_s <= duration <= cfg.max_cycle_s:
            records.append(CycleRecord(
                start=onset, end=end, trigger_t=trigger_t,
                lean_left=lean_left, lean_right=lean_right,
                left_integral=left_int, right_integral=right_int,
            ))
        k = min(i, n - 1) + 1
    return records


def offline_lift_segment(trace: CanBandTrace, config: DetectionConfig) -> list[LiftRecord]:
    """Forward-scan oracle for the lift-hold-return machine."""
    cfg = config
    n = len(trace)
    t = trace.t
    grip = trace.grip_n
    az = trace.accel_z
    records: list[LiftRecord] = []
    k = 0
    while k < n:
        a = az[k] - GRAVITY
        if not (grip[k] > cfg.grip_threshold_n and a > cfg.lift_accel_band):
            k += 1
            continue
        start = t[k]
        vel = 0.0
        disp = 0.0
        max_disp = 0.0
        grip_sum = grip[k]
        grip_count = 1
        grip_peak = grip[k]
        prev_a = a
        still_since: float | None = None
        i = k + 1
        held_at = None
        while i < n:  # lifting
            a = az[i] - GRAVITY
            dt = t[i] - t[i - 1]
            grip_sum += grip[i]
            grip_count += 1
            grip_peak = max(grip_peak, grip[i])
            vel += 0.5 * (prev_a + a) * dt
            disp += vel * dt
            max_disp = max(max_disp, abs(disp))
            prev_a = a
            if grip[i] < cfg.grip_threshold_n:
                break
            if abs(a) < cfg.rest_band:
                if still_since is None:
                    still_since = t[i]
                if t[i] - still_since >= cfg.hold_settle_s:
                    vel = 0.0
                    held_at = i
                    break
            else:
                still_since = None
            i += 1
        if held_at is None:
            k = i + 1
            continue
        i = held_at + 1
        returning_at = None
        while i < n:  # holding
            a = az[i] - GRAVITY
            grip_sum += grip[i]
            grip_count += 1
            grip_peak = max(grip_peak, grip[i])
            prev_a = a
            if grip[i] < cfg.grip_threshold_n:
                break
            if a < -cfg.lift_accel_band:
                returning_at = i
                break
            i += 1
        if returning_at is None:
            k = i + 1
            continue
        i = returning_at + 1
        done_at = None
        while i < n:  # returning
            a = az[i] - GRAVITY
            dt = t[i] - t[i - 1]
            grip_sum += grip[i]
            grip_count += 1
            grip_peak = max(grip_peak, grip[i])
            vel += 0.5 * (prev_a + a) * dt
            disp += vel * dt
            max_disp = max(max_disp, abs(disp))
            prev_a = a
            if grip[i] < cfg.grip_threshold_n:
                done_at = i
                break
            i += 1
        if done_at is None:
            break
        records.append(LiftRecord(
            start=start, end=t[done_at], distance_m=max_disp,
            grip_avg_n=grip_sum / grip_count, grip_peak_n=grip_peak,
        ))
        k = done_at + 1
    return records
