"""Peripheral simulator: packet streams plus ground truth from a scenario script.

Signal model: while seated the body weight rides mostly on the cushion with the
rest on the mat; rises and lowers move it between them along a smoothstep ramp
so load is conserved at every sample. Armrest force during an assisted movement
is modelled as an additional bracing push, so the cushion+mat sum still carries
the full body weight. Lifts drive the can band's grip, vertical acceleration
and light signals.

Ground-truth cycle boundaries are anchored where the noise-free cushion signal
leaves/re-enters the near-baseline band used by the detector (default 95%),
computed analytically from the ramp shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .detect import (
    DetectionConfig,
    GRAVITY,
    LiftDetector,
    LiftPhase,
    MoveKind,
    RepType,
    pair_records,
)
from .scenario import Action, ScenarioScript, Side
from .wire import (
    CanBandPayload,
    HeartbeatPayload,
    LedState,
    PeripheralId,
    PeripheralKind,
    PeripheralPacket,
    PressureFramePayload,
    SATURATION_CEILING,
)

SEAT_SHARE = 0.85           # fraction of body weight on the cushion while seated
CUSHION_SHAPE = (8, 8)
MAT_SHAPE = (8, 16)
ARMREST_SHAPE = (4, 4)
AMBIENT_LUX = 250.0
SLEEP_LUX = 5.0
SLEEP_DELAY_S = 10.0
GRIP_HOLD_N = 18.0
GRIP_RAMP_S = 0.25
NOISE_FRACTION = 0.02       # sensor noise relative to a cell's share of body weight
HEARTBEAT_INTERVAL_S = 1.0

CUSHION = PeripheralId(PeripheralKind.SEAT_CUSHION, 0)
ARM_LEFT = PeripheralId(PeripheralKind.ARMREST_LEFT, 0)
ARM_RIGHT = PeripheralId(PeripheralKind.ARMREST_RIGHT, 0)
MAT = PeripheralId(PeripheralKind.FLOOR_MAT, 0)
CAN_BAND = PeripheralId(PeripheralKind.CAN_BAND, 0)

STATION_PERIPHERALS = (CUSHION, ARM_LEFT, ARM_RIGHT, MAT)


class SimulationError(Exception):
    pass


def smoothstep(u: np.ndarray | float):
    u = np.clip(u, 0.0, 1.0)
    return u * u * (3.0 - 2.0 * u)


def inv_smoothstep(y: float) -> float:
    """Solve 3u^2 - 2u^3 = y for u in [0, 1] by bisection."""
    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if 3 * mid * mid - 2 * mid ** 3 < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _gauss_template(shape: tuple[int, int], center: tuple[float, float],
                    sigma: tuple[float, float]) -> np.ndarray:
    rows, cols = shape
    r = np.arange(rows)[:, None]
    c = np.arange(cols)[None, :]
    g = np.exp(-0.5 * (((r - center[0]) / sigma[0]) ** 2 + ((c - center[1]) / sigma[1]) ** 2))
    return g / g.sum()


@dataclass(frozen=True, slots=True)
class CycleTruth:
    """One scripted sit-to-stand cycle with detection-anchored boundaries."""

    start: float            # cushion leaves the 95% band (analytic)
    end: float              # cushion back inside the 95% band
    script_start: float     # rise step start
    script_end: float       # lower step end
    lean_left: bool
    lean_right: bool

    @property
    def duration_s(self) -> float:
        return self.end - self.start


@dataclass(frozen=True, slots=True)
class LiftTruth:
    start: float
    end: float
    height_m: float
    hold_s: float

    @property
    def duration_s(self) -> float:
        return self.end - self.start


@dataclass(frozen=True, slots=True)
class ExpectedEvent:
    rep_type: RepType
    kind: MoveKind
    start: float
    end: float


@dataclass
class GroundTruth:
    cycles: list[CycleTruth] = field(default_factory=list)
    lifts: list[LiftTruth] = field(default_factory=list)
    sleep_windows: list[tuple[float, float]] = field(default_factory=list)


@dataclass(frozen=True, slots=True)
class _TruthRecord:
    start: float
    end: float

    @property
    def duration_s(self) -> float:
        return self.end - self.start


def expected_events(truth: GroundTruth, config: DetectionConfig) -> list[ExpectedEvent]:
    """Events the detector should report, per the duration and pairing rules."""
    out: list[ExpectedEvent] = []
    valid = [
        _TruthRecord(c.start, c.end)
        for c in truth.cycles
        if config.min_cycle_s <= c.duration_s <= config.max_cycle_s
    ]
    for rep in pair_records(valid, config.double_gap_s):
        out.append(ExpectedEvent(rep.rep_type, MoveKind.SIT_TO_STAND, rep.start, rep.end))
    lift_recs = [_TruthRecord(lt.start, lt.end) for lt in truth.lifts]
    for rep in pair_records(lift_recs, config.double_gap_s):
        out.append(ExpectedEvent(rep.rep_type, MoveKind.LIFT, rep.start, rep.end))
    return sorted(out, key=lambda e: e.end)


@dataclass
class SignalArrays:
    """Noise-free per-sample channel values, kept for demos and invariants."""

    t: np.ndarray
    cushion: np.ndarray
    mat: np.ndarray
    arm_left: np.ndarray
    arm_right: np.ndarray
    mat_balance: np.ndarray     # left-foot share of mat load
    cushion_dx: np.ndarray      # lateral CoP wobble, in grid cells
    grip: np.ndarray
    accel_z: np.ndarray
    lux: np.ndarray
    rising: np.ndarray          # bool: sample lies in a rise step


@dataclass
class SimulationResult:
    streams: dict[PeripheralId, list[tuple[float, PeripheralPacket]]]
    truth: GroundTruth
    signals: SignalArrays
    script: ScenarioScript
    seed: int


class CanBandFirmware:
    """On-device logic: LED phase echo mirroring the lift machine, and the
    light-triggered sleep mode that stops packet emission in a cupboard."""

    def __init__(self, config: DetectionConfig | None = None,
                 sleep_lux: float = SLEEP_LUX, sleep_delay_s: float = SLEEP_DELAY_S):
        self._detector = LiftDetector(config or DetectionConfig())
        self.sleep_lux = sleep_lux
        self.sleep_delay_s = sleep_delay_s
        self.asleep = False
        self._dark_since: float | None = None
        self.led = LedState.IDLE

    def step(self, now: float, grip_n: float, accel_z: float, lux: float) -> tuple[LedState, bool]:
        if lux < self.sleep_lux:
            if self._dark_since is None:
                self._dark_since = now
            if not self.asleep and now - self._dark_since >= self.sleep_delay_s:
                self.asleep = True
        else:
            self._dark_since = None
            self.asleep = False
        if self.asleep:
            self.led = LedState.IDLE
            return self.led, True
        self._detector.step(now, grip_n, accel_z)
        self.led = {
            LiftPhase.IDLE: LedState.IDLE,
            LiftPhase.LIFT: LedState.LIFT,
            LiftPhase.HOLD: LedState.HOLD,
            LiftPhase.RETURN: LedState.RETURN,
        }[self._detector.phase]
        return self.led, False


def _initial_posture(script: ScenarioScript) -> str:
    for step in script.steps:
        if step.action in (Action.SIT_IDLE, Action.RISE):
            return "seated"
        if step.action in (Action.STAND_IDLE, Action.LOWER):
            return "standing"
    return "seated"


def synthesize_streams(
    script: ScenarioScript,
    seed: int,
    config: DetectionConfig | None = None,
) -> SimulationResult:
    """Deterministically generate all five peripheral streams plus ground truth."""
    cfg = config or DetectionConfig()
    fs = script.sample_rate_hz
    weight = script.body_weight_load
    n_total = round(script.total_duration_s * fs)
    if n_total <= 0:
        raise SimulationError("scenario has zero duration")

    t_all = np.arange(n_total) / fs
    cushion = np.zeros(n_total)
    mat = np.zeros(n_total)
    arm_l = np.zeros(n_total)
    arm_r = np.zeros(n_total)
    balance = np.full(n_total, 0.5)
    dx = np.zeros(n_total)
    grip = np.zeros(n_total)
    accel = np.full(n_total, GRAVITY)
    lux = np.full(n_total, AMBIENT_LUX)
    rising_mask = np.zeros(n_total, dtype=bool)

    posture = _initial_posture(script)
    lean: dict[Side, float] = {Side.LEFT: 0.0, Side.RIGHT: 0.0}
    truth = GroundTruth()
    open_cycle: dict | None = None

    onset_band = 1.0 - cfg.onset_settle            # e.g. 0.05
    u_leave = inv_smoothstep(onset_band)           # ramp point where frac crosses 95%
    u_settle = inv_smoothstep(cfg.onset_settle)

    seated_cushion = SEAT_SHARE * weight
    seated_mat = weight - seated_cushion

    def lean_loads(scale: np.ndarray | float) -> tuple[np.ndarray | float, np.ndarray | float]:
        return lean[Side.LEFT] * weight * scale, lean[Side.RIGHT] * weight * scale

    cursor = 0.0
    k0 = 0
    for step in script.steps:
        t_start = cursor
        cursor += step.duration_s
        k1 = round(cursor * fs)
        n = k1 - k0
        sl = slice(k0, k1)
        if n > 0:
            u = (t_all[sl] - t_start) / step.duration_s

        act = step.action
        if act is Action.LEAN_ON_ARMREST:
            sides = [Side.LEFT, Side.RIGHT] if step.side is Side.BOTH else [step.side]
            for s in sides:
                lean[s] = step.fraction
            if n > 0:
                if posture != "seated":
                    raise SimulationError("lean_on_armrest requires a seated posture")
                cushion[sl] = seated_cushion
                mat[sl] = seated_mat
                l, r = lean_loads(1.0)
                arm_l[sl] = l
                arm_r[sl] = r
        elif n == 0:
            pass
        elif act in (Action.SIT_IDLE, Action.WAIT, Action.LIFT_OBJECT,
                     Action.PLACE_IN_CUPBOARD):
            if act is Action.SIT_IDLE and posture != "seated":
                raise SimulationError("sit_idle while standing; add a lower step")
            if posture == "seated":
                cushion[sl] = seated_cushion
                mat[sl] = seated_mat
            else:
                mat[sl] = weight
            if act is Action.LIFT_OBJECT:
                _fill_lift(step, u, grip[sl], accel[sl])
            elif act is Action.PLACE_IN_CUPBOARD:
                lux[sl] = 0.0
        elif act is Action.STAND_IDLE:
            if posture != "standing":
                raise SimulationError("stand_idle while seated; add a rise step")
            mat[sl] = weight
        elif act is Action.RISE:
            if posture != "seated":
                raise SimulationError("rise while already standing")
            r = smoothstep(u)
            cushion[sl] = seated_cushion * (1.0 - r)
            mat[sl] = weight - cushion[sl]
            bump = np.sin(np.pi * u)
            l, rr = lean_loads(bump)
            arm_l[sl] = l
            arm_r[sl] = rr
            rising_mask[sl] = True
            posture = "standing"
            open_cycle = {
                "start": t_start + step.duration_s * u_leave,
                "script_start": t_start,
                "lean_left": lean[Side.LEFT] > 0,
                "lean_right": lean[Side.RIGHT] > 0,
            }
        elif act is Action.LOWER:
            if posture != "standing":
                raise SimulationError("lower while already seated")
            r = smoothstep(u)
            cushion[sl] = seated_cushion * r
            mat[sl] = weight - cushion[sl]
            bump = np.sin(np.pi * u)
            l, rr = lean_loads(bump)
            arm_l[sl] = l
            arm_r[sl] = rr
            posture = "seated"
            if open_cycle is not None:
                truth.cycles.append(CycleTruth(
                    start=open_cycle["start"],
                    end=t_start + step.duration_s * u_settle,
                    script_start=open_cycle["script_start"],
                    script_end=cursor,
                    lean_left=open_cycle["lean_left"] or lean[Side.LEFT] > 0,
                    lean_right=open_cycle["lean_right"] or lean[Side.RIGHT] > 0,
                ))
                open_cycle = None
        elif act is Action.SHIFT_WEIGHT:
            cycles = max(1.0, round(step.duration_s / 2.0))
            wave = 0.5 * (1.0 - np.cos(2.0 * np.pi * u * cycles))
            if posture == "seated":
                x = np.minimum(step.amplitude, SEAT_SHARE) * weight * wave
                cushion[sl] = seated_cushion - x
                mat[sl] = seated_mat + x
                dx[sl] = step.amplitude * 2.0 * np.sin(2.0 * np.pi * u * cycles)
            else:
                mat[sl] = weight
                balance[sl] = 0.5 + 0.5 * step.amplitude * np.sin(2.0 * np.pi * u * cycles)
        else:  # pragma: no cover - enum is exhaustive
            raise SimulationError(f"unhandled action {act}")
        if act is Action.LIFT_OBJECT and step.duration_s > 0:
            truth.lifts.append(LiftTruth(
                start=t_start, end=cursor, height_m=step.height_m, hold_s=step.hold_s,
            ))
        k0 = k1

    signals = SignalArrays(
        t=t_all, cushion=cushion, mat=mat, arm_left=arm_l, arm_right=arm_r,
        mat_balance=balance, cushion_dx=dx, grip=grip, accel_z=accel, lux=lux,
        rising=rising_mask,
    )
    rng = np.random.default_rng(seed)
    streams = _build_packets(signals, script, rng, cfg, truth)
    return SimulationResult(streams=streams, truth=truth, signals=signals,
                            script=script, seed=seed)


def _fill_lift(step, u: np.ndarray, grip_out: np.ndarray, accel_out: np.ndarray) -> None:
    """Grip and vertical acceleration for one lift-hold-return step."""
    d = step.duration_s
    tau = u * d
    ramp = GRIP_RAMP_S
    t_up = (d - step.hold_s - 2.0 * ramp) / 2.0
    up_start = ramp
    hold_start = up_start + t_up
    down_start = hold_start + step.hold_s
    down_end = down_start + t_up

    g = np.full_like(tau, GRIP_HOLD_N)
    g[tau < ramp] = GRIP_HOLD_N * (tau[tau < ramp] / ramp)
    tail = tau >= d - ramp
    g[tail] = GRIP_HOLD_N * (d - tau[tail]) / ramp
    grip_out[:] = np.clip(g, 0.0, None)

    a = np.zeros_like(tau)
    in_up = (tau >= up_start) & (tau < hold_start)
    uu = (tau[in_up] - up_start) / t_up
    a[in_up] = step.height_m * (6.0 - 12.0 * uu) / (t_up * t_up)
    in_down = (tau >= down_start) & (tau < down_end)
    ud = (tau[in_down] - down_start) / t_up
    a[in_down] = -step.height_m * (6.0 - 12.0 * ud) / (t_up * t_up)
    accel_out[:] = GRAVITY + a


def _frames_from_loads(loads: np.ndarray, templates: np.ndarray,
                       weights: np.ndarray, rng: np.random.Generator,
                       noise_scale: float) -> np.ndarray:
    """Blend blob templates per sample, scale by load, add clipped sensor noise."""
    grids = np.einsum("sk,krc->src", weights, templates) * loads[:, None, None]
    grids += rng.normal(0.0, noise_scale, grids.shape)
    np.clip(grids, 0.0, SATURATION_CEILING, out=grids)
    return np.rint(grids).astype(np.uint16)


def _build_packets(signals: SignalArrays, script: ScenarioScript,
                   rng: np.random.Generator, cfg: DetectionConfig,
                   truth: GroundTruth) -> dict[PeripheralId, list[tuple[float, PeripheralPacket]]]:
    n = len(signals.t)
    weight = script.body_weight_load
    fs = script.sample_rate_hz
    hb_every = max(1, round(HEARTBEAT_INTERVAL_S * fs))

    # cushion: blob blended between center / left / right for CoP wobble
    c_rows, c_cols = CUSHION_SHAPE
    cc = ((c_rows - 1) / 2.0, (c_cols - 1) / 2.0)
    t_center = _gauss_template(CUSHION_SHAPE, cc, (1.8, 1.8))
    t_left = _gauss_template(CUSHION_SHAPE, (cc[0], cc[1] - 1.5), (1.8, 1.8))
    t_right = _gauss_template(CUSHION_SHAPE, (cc[0], cc[1] + 1.5), (1.8, 1.8))
    wobble = np.clip(signals.cushion_dx / 1.5, -1.0, 1.0)
    w_center = 1.0 - np.abs(wobble)
    w_l = np.where(wobble < 0, -wobble, 0.0)
    w_r = np.where(wobble > 0, wobble, 0.0)
    cushion_frames = _frames_from_loads(
        signals.cushion, np.stack([t_center, t_left, t_right]),
        np.column_stack([w_center, w_l, w_r]), rng,
        NOISE_FRACTION * weight / (c_rows * c_cols),
    )

    m_rows, m_cols = MAT_SHAPE
    foot_sigma = (1.6, 1.1)
    t_lf = _gauss_template(MAT_SHAPE, ((m_rows - 1) / 2.0, 3.5), foot_sigma)
    t_rf = _gauss_template(MAT_SHAPE, ((m_rows - 1) / 2.0, m_cols - 4.5), foot_sigma)
    mat_frames = _frames_from_loads(
        signals.mat, np.stack([t_lf, t_rf]),
        np.column_stack([signals.mat_balance, 1.0 - signals.mat_balance]), rng,
        NOISE_FRACTION * weight / (m_rows * m_cols),
    )

    a_rows, a_cols = ARMREST_SHAPE
    t_arm = _gauss_template(ARMREST_SHAPE, ((a_rows - 1) / 2.0, (a_cols - 1) / 2.0), (1.4, 1.4))
    arm_tmpl = np.stack([t_arm])
    ones = np.ones((n, 1))
    arm_noise = NOISE_FRACTION * weight / (a_rows * a_cols) * 0.5
    arm_l_frames = _frames_from_loads(signals.arm_left, arm_tmpl, ones, rng, arm_noise)
    arm_r_frames = _frames_from_loads(signals.arm_right, arm_tmpl, ones, rng, arm_noise)

    grip_noisy = np.clip(signals.grip + rng.normal(0.0, 0.15, n), 0.0, None)
    accel_noisy = signals.accel_z + rng.normal(0.0, 0.02, n)
    accel_xy = rng.normal(0.0, 0.02, (n, 2))

    firmware = CanBandFirmware(cfg)
    led = np.zeros(n, dtype=np.uint8)
    asleep = np.zeros(n, dtype=bool)
    for k in range(n):
        state, sleeping = firmware.step(
            float(signals.t[k]), float(grip_noisy[k]), float(accel_noisy[k]),
            float(signals.lux[k]),
        )
        led[k] = state
        asleep[k] = sleeping
    _collect_sleep_windows(signals.t, asleep, truth)

    streams: dict[PeripheralId, list[tuple[float, PeripheralPacket]]] = {
        pid: [] for pid in (CUSHION, ARM_LEFT, ARM_RIGHT, MAT, CAN_BAND)
    }
    seqs = {pid: 0 for pid in streams}

    def emit(pid: PeripheralId, t: float, payload) -> None:
        streams[pid].append((t, PeripheralPacket(
            id=pid, seq=seqs[pid], device_time_ms=round(t * 1000.0), payload=payload,
        )))
        seqs[pid] += 1

    frame_sets = (
        (CUSHION, cushion_frames, CUSHION_SHAPE),
        (ARM_LEFT, arm_l_frames, ARMREST_SHAPE),
        (ARM_RIGHT, arm_r_frames, ARMREST_SHAPE),
        (MAT, mat_frames, MAT_SHAPE),
    )
    for k in range(n):
        t = float(signals.t[k])
        heartbeat_due = k % hb_every == 0
        for pid, frames, (rows, cols) in frame_sets:
            emit(pid, t, PressureFramePayload(rows, cols, tuple(map(int, frames[k].ravel()))))
            if heartbeat_due:
                emit(pid, t, HeartbeatPayload())
        if not asleep[k]:
            emit(CAN_BAND, t, CanBandPayload(
                grip_n=float(grip_noisy[k]),
                accel=(float(accel_xy[k, 0]), float(accel_xy[k, 1]), float(accel_noisy[k])),
                lux=float(signals.lux[k]),
                led_state=LedState(int(led[k])),
            ))
            if heartbeat_due:
                emit(CAN_BAND, t, HeartbeatPayload())
    return streams


def _collect_sleep_windows(t: np.ndarray, asleep: np.ndarray, truth: GroundTruth) -> None:
    start = None
    for k in range(len(t)):
        if asleep[k] and start is None:
            start = float(t[k])
        elif not asleep[k] and start is not None:
            truth.sleep_windows.append((start, float(t[k])))
            start = None
    if start is not None:
        truth.sleep_windows.append((start, float(t[-1])))


# --- transport faults ----------------------------------------------------------


class FaultError(Exception):
    pass


@dataclass(frozen=True)
class FaultProfile:
    loss_prob: float = 0.0
    jitter_ms: float = 0.0
    reorder_prob: float = 0.0
    dropout_windows: dict[PeripheralId, tuple[tuple[float, float], ...]] = field(
        default_factory=dict
    )

    def __post_init__(self):
        for name in ("loss_prob", "reorder_prob"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise FaultError(f"{name} must lie in [0, 1]")
        if self.jitter_ms < 0:
            raise FaultError("jitter_ms must be non-negative")
        for pid, windows in self.dropout_windows.items():
            spans = sorted(windows)
            for (s0, e0), (s1, _e1) in zip(spans, spans[1:]):
                if s1 < e0:
                    raise FaultError(f"overlapping dropout windows for {pid}")
            for s, e in spans:
                if e < s:
                    raise FaultError(f"dropout window ends before it starts: {(s, e)}")


@dataclass(frozen=True, slots=True)
class Arrival:
    at: float                      # hub receipt time, session seconds
    packet: PeripheralPacket


def apply_faults(
    streams: dict[PeripheralId, list[tuple[float, PeripheralPacket]]],
    profile: FaultProfile,
    seed: int,
) -> list[Arrival]:
    """Perturb emission schedules into a hub arrival schedule, deterministically."""
    rng = np.random.default_rng(seed)
    arrivals: list[Arrival] = []
    jitter_s = profile.jitter_ms / 1000.0
    for pid in sorted(streams, key=lambda p: (p.kind, p.instance)):
        packets = streams[pid]
        windows = profile.dropout_windows.get(pid, ())
        kept: list[tuple[float, PeripheralPacket]] = []
        losses = rng.random(len(packets))
        for (emit_t, packet), roll in zip(packets, losses):
            if any(s <= emit_t < e for s, e in windows):
                continue
            if roll < profile.loss_prob:
                continue
            kept.append((emit_t, packet))
        times = np.array([t for t, _ in kept])
        if jitter_s > 0 and len(times):
            times = times + rng.uniform(0.0, jitter_s, len(times))
        times = list(times)
        if profile.reorder_prob > 0:
            swaps = rng.random(max(len(kept) - 1, 0))
            for i, roll in enumerate(swaps):
                if roll < profile.reorder_prob:
                    times[i], times[i + 1] = times[i + 1], times[i]
        for (_, packet), at in zip(kept, times):
            arrivals.append(Arrival(float(at), packet))
    arrivals.sort(key=lambda a: (a.at, a.packet.id.kind, a.packet.id.instance, a.packet.seq))
    return arrivals
