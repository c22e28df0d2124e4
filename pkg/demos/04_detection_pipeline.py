"""The full hub pipeline on one scenario: stage walk, validated repetitions,
and the exhaustive offline oracle arriving at the same answer.
"""

from pathlib import Path

from repsense.detect import build_event, offline_segment, pair_records
from repsense.hub import run_session
from repsense.scenario import load_scenario

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

script = load_scenario(SCENARIOS / "armrest_double.scn")
result = run_session(script, seed=23)
hub = result.hub

print("live event stream:")
for event in result.events:
    if event.kind == "stage_changed":
        print(f"  {event.at:6.2f}s  stage -> {event.payload['stage']}")
    elif event.kind == "repetition_logged":
        p = event.payload
        print(f"  {event.at:6.2f}s  LOGGED {p['rep_type']} {p['kind']} "
              f"({p['duration_s']:.2f} s, leaning {p['balance_leaning']})")

print("\nvalidated repetitions:")
for ev in result.rep_events:
    print(f"  {ev.rep_type.value} {ev.kind.value}: {ev.duration_s:.2f} s, "
          f"signature {ev.sensor_signature}")

# The streaming machine against the brute-force scan over the same trace.
cfg = hub.detection
cycles = offline_segment(hub.station.trace, cfg)
offline = [build_event(r, "oracle") for r in pair_records(cycles, cfg.double_gap_s)]
agree = [(e.rep_type, e.duration_s) for e in offline] == [
    (e.rep_type, e.duration_s) for e in result.rep_events
]
print(f"\noffline oracle found {len(cycles)} cycles -> "
      f"{len(offline)} repetitions; exact agreement: {agree}")

print(f"\nper-cycle symmetry (left/right load balance while rising): "
      f"{hub.station.last_symmetry:.3f}")

# A repositioning bob must abort without logging anything.
bob = run_session(load_scenario(SCENARIOS / "reposition_abort.scn"), seed=23)
walk = [e.payload["stage"] for e in bob.events if e.kind == "stage_changed"]
print(f"\nrepositioning scenario: stage walk {walk}, "
      f"repetitions logged: {len(bob.rep_events)}")
