import numpy as np
import pytest

from conftest import scenario

from repsense.detect import DetectionConfig, GRAVITY
from repsense.pressure import frame_grid
from repsense.scenario import parse_scenario
from repsense.simulate import (
    CAN_BAND,
    CUSHION,
    CanBandFirmware,
    FaultError,
    FaultProfile,
    MAT,
    SimulationError,
    apply_faults,
    expected_events,
    synthesize_streams,
)
from repsense.wire import LedState, PressureFramePayload, encode_packet


def stream_bytes(sim) -> bytes:
    chunks = []
    for pid in sorted(sim.streams, key=lambda p: (p.kind, p.instance)):
        for t, packet in sim.streams[pid]:
            chunks.append(str(t).encode())
            chunks.append(encode_packet(packet))
    return b"".join(chunks)


def test_determinism_byte_identical():
    script = scenario("mixed_day")
    a = synthesize_streams(script, seed=99)
    b = synthesize_streams(script, seed=99)
    assert stream_bytes(a) == stream_bytes(b)


def test_different_seed_changes_noise():
    script = scenario("clean_single")
    a = synthesize_streams(script, seed=1)
    b = synthesize_streams(script, seed=2)
    assert stream_bytes(a) != stream_bytes(b)


def test_seated_baseline_levels():
    sim = synthesize_streams(parse_scenario("sit_idle 5"), seed=0)
    weight = sim.script.body_weight_load
    cushion_totals = [
        sum(p.payload.cells) for _, p in sim.streams[CUSHION]
        if isinstance(p.payload, PressureFramePayload)
    ]
    mat_totals = [
        sum(p.payload.cells) for _, p in sim.streams[MAT]
        if isinstance(p.payload, PressureFramePayload)
    ]
    assert np.mean(cushion_totals) == pytest.approx(0.85 * weight, rel=0.05)
    assert np.mean(mat_totals) == pytest.approx(0.15 * weight, rel=0.10)
    assert sim.truth.cycles == []


def test_load_conservation_during_rise():
    sim = synthesize_streams(scenario("clean_double"), seed=5)
    weight = sim.script.body_weight_load
    cushion = {t: sum(p.payload.cells) for t, p in sim.streams[CUSHION]
               if isinstance(p.payload, PressureFramePayload)}
    mat = {t: sum(p.payload.cells) for t, p in sim.streams[MAT]
           if isinstance(p.payload, PressureFramePayload)}
    rising_times = sim.signals.t[sim.signals.rising]
    assert len(rising_times) > 0
    for t in rising_times:
        total = cushion[float(t)] + mat[float(t)]
        assert abs(total - weight) / weight < 0.05


def test_ground_truth_boundaries_lie_on_ramps():
    sim = synthesize_streams(scenario("clean_double"), seed=5)
    for cycle in sim.truth.cycles:
        assert cycle.script_start < cycle.start < cycle.script_end
        assert cycle.script_start < cycle.end <= cycle.script_end
        # start sits on the falling cushion ramp: value strictly between extremes
        k = np.searchsorted(sim.signals.t, cycle.start)
        c = sim.signals.cushion
        assert c[k + 2] < c[max(k - 2, 0)]


def test_clean_double_ground_truth():
    sim = synthesize_streams(scenario("clean_double"), seed=5)
    assert len(sim.truth.cycles) == 2
    events = expected_events(sim.truth, DetectionConfig())
    assert [(e.rep_type.value, e.kind.value) for e in events] == [("double", "sit_to_stand")]


def test_wait_separated_cycles_still_pair():
    text = (
        "sit_idle 5\nrise 2\nstand_idle 3\nlower 2\nwait 4\n"
        "rise 2\nstand_idle 3\nlower 2\nsit_idle 5\n"
    )
    sim = synthesize_streams(parse_scenario(text), seed=1)
    events = expected_events(sim.truth, DetectionConfig())
    assert [e.rep_type.value for e in events] == ["double"]


def test_empty_script_rejected():
    with pytest.raises(SimulationError):
        synthesize_streams(parse_scenario("sit_idle 0"), seed=0)


def test_posture_mismatch_rejected():
    with pytest.raises(SimulationError):
        synthesize_streams(parse_scenario("sit_idle 2\nlower 2"), seed=0)


# --- faults ----------------------------------------------------------------------

def test_identity_profile_preserves_schedule():
    sim = synthesize_streams(scenario("clean_single"), seed=3)
    arrivals = apply_faults(sim.streams, FaultProfile(), seed=0)
    expected = sorted(
        ((t, p) for pid in sim.streams for t, p in sim.streams[pid]),
        key=lambda it: (it[0], it[1].id.kind, it[1].id.instance, it[1].seq),
    )
    assert [(a.at, a.packet) for a in arrivals] == expected


def test_total_loss_empties_schedule():
    sim = synthesize_streams(scenario("clean_single"), seed=3)
    arrivals = apply_faults(sim.streams, FaultProfile(loss_prob=1.0), seed=0)
    assert arrivals == []


def test_loss_rate_within_binomial_bound():
    sim = synthesize_streams(scenario("mixed_day"), seed=3)
    n = sum(len(v) for v in sim.streams.values())
    p = 0.1
    arrivals = apply_faults(sim.streams, FaultProfile(loss_prob=p), seed=0)
    expected = n * (1 - p)
    sigma = (n * p * (1 - p)) ** 0.5
    assert abs(len(arrivals) - expected) <= 3 * sigma


def test_jitter_bounded_and_nonnegative():
    sim = synthesize_streams(scenario("clean_single"), seed=3)
    arrivals = apply_faults(sim.streams, FaultProfile(jitter_ms=100.0), seed=0)
    emit_times = {
        (str(p.id), p.seq): t for pid in sim.streams for t, p in sim.streams[pid]
    }
    for a in arrivals:
        delay = a.at - emit_times[(str(a.packet.id), a.packet.seq)]
        assert -1e-9 <= delay <= 0.1 + 1e-9


def test_dropout_window_removes_packets():
    sim = synthesize_streams(scenario("clean_single"), seed=3)
    profile = FaultProfile(dropout_windows={MAT: ((5.0, 10.0),)})
    arrivals = apply_faults(sim.streams, profile, seed=0)
    mat_times = [a.at for a in arrivals if a.packet.id == MAT]
    assert not any(5.0 <= t < 10.0 for t in mat_times)
    cushion_times = [a.at for a in arrivals if a.packet.id == CUSHION]
    assert any(5.0 <= t < 10.0 for t in cushion_times)


def test_fault_determinism():
    sim = synthesize_streams(scenario("clean_double"), seed=3)
    profile = FaultProfile(loss_prob=0.05, jitter_ms=80.0, reorder_prob=0.02)
    a = apply_faults(sim.streams, profile, seed=9)
    b = apply_faults(sim.streams, profile, seed=9)
    assert a == b


def test_bad_profiles_rejected():
    with pytest.raises(FaultError):
        FaultProfile(loss_prob=1.5)
    with pytest.raises(FaultError):
        FaultProfile(jitter_ms=-1)
    with pytest.raises(FaultError):
        FaultProfile(dropout_windows={MAT: ((0.0, 5.0), (4.0, 8.0))})


# --- can band firmware --------------------------------------------------------------

def test_firmware_sleeps_after_dark_delay():
    fw = CanBandFirmware()
    for k in range(400):
        t = k * 0.05
        led, asleep = fw.step(t, 0.0, GRAVITY, lux=0.0)
    assert asleep
    # 10 s of darkness is the default delay
    fw2 = CanBandFirmware()
    states = [fw2.step(k * 0.05, 0.0, GRAVITY, lux=0.0)[1] for k in range(250)]
    first_sleep = states.index(True)
    assert first_sleep * 0.05 == pytest.approx(10.0, abs=0.1)


def test_firmware_wakes_when_bright():
    fw = CanBandFirmware()
    for k in range(300):
        fw.step(k * 0.05, 0.0, GRAVITY, lux=0.0)
    assert fw.asleep
    _, asleep = fw.step(15.01, 0.0, GRAVITY, lux=250.0)
    assert not asleep


def test_firmware_led_walks_lift_phases():
    sim = synthesize_streams(scenario("lift_single"), seed=0)
    leds = [p.payload.led_state for _, p in sim.streams[CAN_BAND]
            if hasattr(p.payload, "led_state")]
    seen = {led for led in leds}
    assert {LedState.IDLE, LedState.LIFT, LedState.HOLD, LedState.RETURN} <= seen


def test_sleeping_band_stops_emitting():
    sim = synthesize_streams(scenario("cupboard_sleep"), seed=0)
    assert sim.truth.sleep_windows, "cupboard scenario must sleep"
    start, end = sim.truth.sleep_windows[0]
    times = [t for t, _ in sim.streams[CAN_BAND]]
    assert not any(start <= t < end for t in times)
    assert any(t >= end for t in times)  # emission resumes after waking
