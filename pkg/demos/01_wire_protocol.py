"""Walk through the wire protocol: encode a packet, look at the bytes,
corrupt them, and watch the registry track a peripheral's lifecycle.
"""

import random

from repsense.registry import Registry
from repsense.wire import (
    CanBandPayload,
    DecodeError,
    HeartbeatPayload,
    LedState,
    PeripheralId,
    PeripheralKind,
    PeripheralPacket,
    PressureFramePayload,
    decode_packet,
    encode_packet,
)

# A 4x4 pressure frame with one loaded corner, as the seat cushion would send it.
frame = PressureFramePayload(4, 4, (900, 120, 0, 0) + (0,) * 12)
packet = PeripheralPacket(
    id=PeripheralId(PeripheralKind.SEAT_CUSHION, 0),
    seq=17,
    device_time_ms=850,
    payload=frame,
)
wire = encode_packet(packet)
print(f"pressure frame packet -> {len(wire)} bytes")
print("  header:", wire[:13].hex(" "))
print("  payload:", wire[13:21].hex(" "), "...")
assert decode_packet(wire) == packet
print("  round trip: exact\n")

band = PeripheralPacket(
    id=PeripheralId(PeripheralKind.CAN_BAND, 0),
    seq=3,
    device_time_ms=150,
    payload=CanBandPayload(17.5, (0.0, 0.0, 11.2), 250.0, LedState.LIFT),
)
print(f"can-band packet -> {len(encode_packet(band))} bytes, also exact:",
      decode_packet(encode_packet(band)) == band, "\n")

# Decoding is total: corrupt bytes produce typed errors, never crashes.
rng = random.Random(0)
outcomes = {}
for _ in range(20_000):
    blob = rng.randbytes(rng.randrange(40))
    try:
        decode_packet(blob)
        outcomes["ok"] = outcomes.get("ok", 0) + 1
    except DecodeError as e:
        name = type(e).__name__
        outcomes[name] = outcomes.get(name, 0) + 1
print("20k random byte strings:", outcomes, "\n")

# The hub registry: auto-enrollment, duplicate/reorder verdicts, liveness.
registry = Registry(stale_timeout_s=5.0, depart_timeout_s=60.0)
hb = lambda seq: PeripheralPacket(band.id, seq, seq * 50, HeartbeatPayload())
print("first packet:", registry.ingest(hb(0), now=0.0))
print("same seq again:", registry.ingest(hb(0), now=0.1)[0])
print("seq 5 then 3:", registry.ingest(hb(5), now=0.2)[0],
      "/", registry.ingest(hb(3), now=0.3)[0])
print("after 6 quiet seconds:", registry.sweep(now=6.3))
print("after 61 more:", registry.sweep(now=67.0))
print("device returns:", registry.ingest(hb(6), now=68.0))
