"""Synthesize peripheral streams from a scenario script, inspect the load
transfer, then degrade the transport and see what survives.
"""

import numpy as np

from repsense.scenario import parse_scenario
from repsense.simulate import CUSHION, FaultProfile, MAT, apply_faults, synthesize_streams

script = parse_scenario("""
# one clean double: two cycles 4 s apart
sit_idle 5
rise 2
stand_idle 3
lower 2
sit_idle 4
rise 2
stand_idle 3
lower 2
sit_idle 5
""")
sim = synthesize_streams(script, seed=7)

print(f"{script.total_duration_s:.0f} s scenario at {script.sample_rate_hz:.0f} Hz")
for pid, packets in sim.streams.items():
    print(f"  {pid}: {len(packets)} packets")

def sparkline(values, width=70):
    values = np.asarray(values)
    idx = np.linspace(0, len(values) - 1, width).astype(int)
    glyphs = " .:-=+*#%@"
    peak = values.max() or 1.0
    return "".join(glyphs[int(v / peak * (len(glyphs) - 1))] for v in values[idx])

print("\ncushion load ", sparkline(sim.signals.cushion))
print("mat load     ", sparkline(sim.signals.mat))
print("(watch the weight move chair -> mat and back, twice)\n")

for cycle in sim.truth.cycles:
    print(f"ground-truth cycle {cycle.start:6.2f} -> {cycle.end:6.2f} s "
          f"(duration {cycle.duration_s:.2f} s)")

clean = apply_faults(sim.streams, FaultProfile(), seed=0)
rough = apply_faults(
    sim.streams,
    FaultProfile(loss_prob=0.05, jitter_ms=100.0, reorder_prob=0.01,
                 dropout_windows={MAT: ((10.0, 11.0),)}),
    seed=0,
)
print(f"\nclean transport: {len(clean)} arrivals")
print(f"faulty transport: {len(rough)} arrivals "
      f"({len(clean) - len(rough)} lost, incl. a 1 s mat dropout)")
late = [a for a in rough if a.at - a.packet.device_time_ms / 1000 > 0.08]
print(f"arrivals delayed more than 80 ms: {len(late)}")
