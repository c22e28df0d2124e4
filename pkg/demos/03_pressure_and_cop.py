"""Pressure conditioning: centre of pressure, per-foot splitting, smoothing
and the occupancy hysteresis that anchors sit/stand decisions.
"""

import numpy as np

from repsense.pressure import (
    OccupancyTracker,
    compute_cop,
    cop_reference,
    per_foot_cop,
    smooth_series,
    split_feet,
)
from repsense.scenario import parse_scenario
from repsense.simulate import MAT, synthesize_streams
from repsense.pressure import frame_grid

# Grab a real standing mat frame from the simulator.
sim = synthesize_streams(parse_scenario("sit_idle 4\nrise 2\nstand_idle 4\nlower 2\nsit_idle 4"), seed=1)
standing_frame = sim.streams[MAT][int(7.0 * 20)][1].payload  # mid-stand
grid = frame_grid(standing_frame)

print("standing mat frame (column loads):")
cols = grid.sum(axis=0)
print("  " + " ".join(f"{int(v):4d}" for v in cols))

cop = compute_cop(grid, activation_floor=100.0)
oracle = cop_reference(grid, activation_floor=100.0)
print(f"\nwhole-mat CoP: x={cop.x:.3f}, y={cop.y:.3f} "
      f"(brute-force oracle agrees to {abs(cop.x - oracle.x):.1e})")

split = split_feet(grid)
left, right = per_foot_cop(grid, activation_floor=50.0)
print(f"feet split at column {split.split_col} "
      f"(midline fallback: {split.midline_fallback})")
print(f"left foot CoP x={left.x:.2f}   right foot CoP x={right.x:.2f}\n")

# Smoothing: causal moving average, constants preserved, no look-ahead.
noisy = 100 + np.random.default_rng(0).normal(0, 8, 60)
smooth = smooth_series(noisy, window=5)
print(f"noisy mean {noisy.mean():.1f} +- {noisy.std():.1f} "
      f"-> smoothed std {smooth[10:].std():.1f}")

# Hysteresis: a load fraction wobbling inside the band never flaps the state.
tracker = OccupancyTracker(load_on=0.30, load_off=0.15)
trajectory = [0.0, 0.1, 0.2, 0.28, 0.32, 0.25, 0.18, 0.22, 0.29, 0.12, 0.05]
print("\nload fraction -> occupancy:")
for i, frac in enumerate(trajectory):
    state, changed = tracker.step(frac, now=float(i))
    mark = "  <- transition" if changed else ""
    print(f"  {frac:4.2f} {'loaded' if state.loaded else 'empty '}{mark}")
