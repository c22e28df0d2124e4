"""Pressure-frame conditioning: load smoothing, centre of pressure, occupancy.

All loads are in calibrated grid units; fractions are relative to baselines
captured by the seated calibration routine at session start.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .wire import PressureFramePayload

DEFAULT_SMOOTH_WINDOW = 5
# Valley columns must stay below this fraction of the strongest column.
VALLEY_REL_FLOOR = 0.05


def frame_grid(payload: PressureFramePayload) -> np.ndarray:
    return np.asarray(payload.cells, dtype=np.float64).reshape(payload.rows, payload.cols)


@dataclass(frozen=True, slots=True)
class CoP:
    """Pressure-weighted centroid in grid units (x along columns, y along rows)."""

    x: float
    y: float
    valid: bool

    @staticmethod
    def invalid() -> "CoP":
        return CoP(float("nan"), float("nan"), False)


def compute_cop(grid: np.ndarray, activation_floor: float) -> CoP:
    """Weighted centroid of a pressure grid; invalid below the activation floor."""
    total = float(grid.sum())
    if total < activation_floor or total <= 0.0:
        return CoP.invalid()
    rows, cols = grid.shape
    col_idx = np.arange(cols, dtype=np.float64)
    row_idx = np.arange(rows, dtype=np.float64)
    x = float((grid.sum(axis=0) @ col_idx) / total)
    y = float((grid.sum(axis=1) @ row_idx) / total)
    return CoP(x, y, True)


def cop_reference(grid: np.ndarray, activation_floor: float) -> CoP:
    """Naive double-loop centroid, kept as the independent oracle for compute_cop."""
    rows, cols = grid.shape
    total = 0.0
    sx = 0.0
    sy = 0.0
    for i in range(rows):
        for j in range(cols):
            p = float(grid[i, j])
            total += p
            sx += p * j
            sy += p * i
    if total < activation_floor or total <= 0.0:
        return CoP.invalid()
    return CoP(sx / total, sy / total, True)


@dataclass(frozen=True, slots=True)
class FootSplit:
    left: np.ndarray
    right: np.ndarray
    split_col: int
    midline_fallback: bool


def split_feet(grid: np.ndarray) -> FootSplit:
    """Partition mat columns at the widest low-pressure valley between the two
    largest loaded column regions; fall back to the midline when no valley exists."""
    rows, cols = grid.shape
    col_load = grid.sum(axis=0)
    peak = float(col_load.max()) if cols else 0.0
    midline = cols // 2
    if peak <= 0.0:
        return FootSplit(grid[:, :midline], grid[:, midline:], midline, True)

    loaded = col_load > peak * VALLEY_REL_FLOOR
    # contiguous loaded column runs, weighted by their mass
    runs: list[tuple[float, int, int]] = []  # (mass, start, end_inclusive)
    start = None
    for j in range(cols):
        if loaded[j] and start is None:
            start = j
        elif not loaded[j] and start is not None:
            runs.append((float(col_load[start:j].sum()), start, j - 1))
            start = None
    if start is not None:
        runs.append((float(col_load[start:].sum()), start, cols - 1))

    if len(runs) < 2:
        return FootSplit(grid[:, :midline], grid[:, midline:], midline, True)

    heavy = sorted(sorted(runs, key=lambda r: r[0], reverse=True)[:2], key=lambda r: r[1])
    gap_start = heavy[0][2] + 1
    gap_end = heavy[1][1] - 1
    if gap_end < gap_start:
        return FootSplit(grid[:, :midline], grid[:, midline:], midline, True)
    split = (gap_start + gap_end + 1) // 2
    return FootSplit(grid[:, :split], grid[:, split:], split, False)


def per_foot_cop(grid: np.ndarray, activation_floor: float) -> tuple[CoP, CoP]:
    """CoP of each foot region, reported in full-grid coordinates."""
    split = split_feet(grid)
    left = compute_cop(split.left, activation_floor)
    right = compute_cop(split.right, activation_floor)
    if right.valid:
        right = CoP(right.x + split.split_col, right.y, True)
    return left, right


class CausalSmoother:
    """Causal moving average over the last `window` samples (shorter at startup).

    A constant input is preserved exactly and output at time t depends only on
    samples at or before t.
    """

    def __init__(self, window: int = DEFAULT_SMOOTH_WINDOW):
        if window < 1:
            raise ValueError("window must be >= 1")
        self.window = window
        self._buf: deque[float] = deque(maxlen=window)
        self._sum = 0.0

    def update(self, value: float) -> float:
        if len(self._buf) == self._buf.maxlen:
            self._sum -= self._buf[0]
        self._buf.append(value)
        self._sum += value
        return self._sum / len(self._buf)

    def reset(self) -> None:
        self._buf.clear()
        self._sum = 0.0


def smooth_series(values, window: int = DEFAULT_SMOOTH_WINDOW) -> np.ndarray:
    sm = CausalSmoother(window)
    return np.array([sm.update(float(v)) for v in values], dtype=np.float64)


@dataclass(frozen=True, slots=True)
class OccupancyState:
    loaded: bool
    since: float


class OccupancyTracker:
    """Dual-threshold (hysteresis) loaded/unloaded switch on load fractions.

    `load_on` must exceed `load_off`; between the two the state holds, so
    consecutive transitions always alternate.
    """

    def __init__(self, load_on: float, load_off: float, start: float = 0.0):
        if not load_on > load_off:
            raise ValueError("load_on must exceed load_off")
        self.load_on = load_on
        self.load_off = load_off
        self.state = OccupancyState(False, start)

    def step(self, load_fraction: float, now: float) -> tuple[OccupancyState, bool]:
        """Advance one sample; returns (state, transitioned)."""
        if not self.state.loaded and load_fraction > self.load_on:
            self.state = OccupancyState(True, now)
            return self.state, True
        if self.state.loaded and load_fraction < self.load_off:
            self.state = OccupancyState(False, now)
            return self.state, True
        return self.state, False


@dataclass
class Baselines:
    """Per-deployment seated calibration: cushion reference load and a
    body-weight estimate (cushion + mat while seated)."""

    cushion: float
    body_weight: float

    @property
    def activation_floor(self) -> float:
        return 0.05 * self.cushion


class Calibrator:
    """Averages seated load over the first `duration_s` of a session."""

    def __init__(self, duration_s: float = 3.0):
        self.duration_s = duration_s
        self._start: float | None = None
        self._cushion_sum = 0.0
        self._combined_sum = 0.0
        self._count = 0
        self.result: Baselines | None = None

    @property
    def done(self) -> bool:
        return self.result is not None

    def feed(self, now: float, cushion_load: float, mat_load: float) -> Baselines | None:
        if self.result is not None:
            return self.result
        if self._start is None:
            self._start = now
        self._cushion_sum += cushion_load
        self._combined_sum += cushion_load + mat_load
        self._count += 1
        if now - self._start >= self.duration_s and self._count > 1:
            cushion = max(self._cushion_sum / self._count, 1e-9)
            body = max(self._combined_sum / self._count, 1e-9)
            self.result = Baselines(cushion=cushion, body_weight=body)
        return self.result

    def reset(self) -> None:
        self._start = None
        self._cushion_sum = 0.0
        self._combined_sum = 0.0
        self._count = 0
        self.result = None
