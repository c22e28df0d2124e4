"""Star-network wire protocol: peripheral identities, packet payloads, binary codec.

The byte format is documented field-by-field in docs/protocol.md. All integers
are little-endian. A packet is a 13-byte header followed by one payload:

    kind u8 | instance u8 | seq u32 | device_time u32 | tag u8 | length u16

Payload tags: 0x01 pressure frame, 0x02 can-band sample, 0x03 heartbeat.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from enum import IntEnum

HEADER = struct.Struct("<BBIIBH")
CANBAND_BODY = struct.Struct("<fffffB")
PRESSURE_HEAD = struct.Struct("<BB")

TAG_PRESSURE = 0x01
TAG_CANBAND = 0x02
TAG_HEARTBEAT = 0x03

# Calibrated pressure units are 12-bit ADC style counts.
SATURATION_CEILING = 4095
# Grids larger than this are rejected at encode time (default 64x64).
MAX_GRID_CELLS = 64 * 64

U32_MAX = 0xFFFFFFFF


class WireError(Exception):
    """Base class for codec failures."""


class EncodeError(WireError):
    pass


class DecodeError(WireError):
    """Base class for decode failures; decode never raises anything else."""


class Truncated(DecodeError):
    pass


class UnknownKind(DecodeError):
    pass


class Malformed(DecodeError):
    pass


class PeripheralKind(IntEnum):
    SEAT_CUSHION = 0
    ARMREST_LEFT = 1
    ARMREST_RIGHT = 2
    FLOOR_MAT = 3
    CAN_BAND = 4


class LedState(IntEnum):
    """Phase pattern currently shown on the can-band LED ring."""

    IDLE = 0
    LIFT = 1
    HOLD = 2
    RETURN = 3


def _f32(x: float) -> float:
    """Quantize to the nearest float32 so encoded packets round-trip bit-exactly."""
    return struct.unpack("<f", struct.pack("<f", x))[0]


@dataclass(frozen=True, slots=True)
class PeripheralId:
    kind: PeripheralKind
    instance: int = 0

    def __post_init__(self):
        if not 0 <= self.instance <= 255:
            raise ValueError(f"instance out of range: {self.instance}")

    def __str__(self) -> str:
        return f"{self.kind.name.lower()}:{self.instance}"


@dataclass(frozen=True, slots=True)
class PressureFramePayload:
    """One sample of a peripheral's pressure grid, row-major cells in calibrated units."""

    rows: int
    cols: int
    cells: tuple[int, ...]

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError("grid dimensions must be positive")
        if len(self.cells) != self.rows * self.cols:
            raise ValueError("cells length does not match rows*cols")
        for c in self.cells:
            if not 0 <= c <= SATURATION_CEILING:
                raise ValueError(f"cell value out of range: {c}")


@dataclass(frozen=True, slots=True)
class CanBandPayload:
    """Grip force (N), body-frame acceleration (m/s^2), ambient light, LED echo.

    Float fields are quantized to float32 on construction; the wire carries
    float32 and equality must survive the round trip.
    """

    grip_n: float
    accel: tuple[float, float, float]
    lux: float
    led_state: LedState = LedState.IDLE

    def __post_init__(self):
        grip = _f32(self.grip_n)
        accel = tuple(_f32(a) for a in self.accel)
        lux = _f32(self.lux)
        if len(accel) != 3:
            raise ValueError("accel must be a 3-vector")
        if not all(math.isfinite(v) for v in (grip, lux, *accel)):
            raise ValueError("non-finite can-band field")
        if grip < 0 or lux < 0:
            raise ValueError("grip and lux must be non-negative")
        object.__setattr__(self, "grip_n", grip)
        object.__setattr__(self, "accel", accel)
        object.__setattr__(self, "lux", lux)
        object.__setattr__(self, "led_state", LedState(self.led_state))


@dataclass(frozen=True, slots=True)
class HeartbeatPayload:
    """Empty keep-alive so the hub registry can track quiet peripherals."""


Payload = PressureFramePayload | CanBandPayload | HeartbeatPayload


@dataclass(frozen=True, slots=True)
class PeripheralPacket:
    id: PeripheralId
    seq: int
    device_time_ms: int
    payload: Payload = field(default_factory=HeartbeatPayload)

    def __post_init__(self):
        if not 0 <= self.seq <= U32_MAX:
            raise ValueError(f"seq out of range: {self.seq}")
        if not 0 <= self.device_time_ms <= U32_MAX:
            raise ValueError(f"device_time out of range: {self.device_time_ms}")


def encode_packet(packet: PeripheralPacket) -> bytes:
    payload = packet.payload
    if isinstance(payload, PressureFramePayload):
        if payload.rows * payload.cols > MAX_GRID_CELLS:
            raise EncodeError(
                f"grid {payload.rows}x{payload.cols} exceeds {MAX_GRID_CELLS} cells"
            )
        tag = TAG_PRESSURE
        body = PRESSURE_HEAD.pack(payload.rows, payload.cols) + struct.pack(
            f"<{len(payload.cells)}H", *payload.cells
        )
    elif isinstance(payload, CanBandPayload):
        tag = TAG_CANBAND
        ax, ay, az = payload.accel
        body = CANBAND_BODY.pack(
            payload.grip_n, ax, ay, az, payload.lux, payload.led_state
        )
    elif isinstance(payload, HeartbeatPayload):
        tag = TAG_HEARTBEAT
        body = b""
    else:
        raise EncodeError(f"unsupported payload type: {type(payload).__name__}")
    header = HEADER.pack(
        packet.id.kind, packet.id.instance, packet.seq, packet.device_time_ms, tag, len(body)
    )
    return header + body


def decode_packet(data: bytes) -> PeripheralPacket:
    """Parse a packet or raise a DecodeError subclass; total on arbitrary input."""
    if len(data) < HEADER.size:
        raise Truncated(f"need {HEADER.size} header bytes, got {len(data)}")
    kind, instance, seq, device_time, tag, length = HEADER.unpack_from(data)
    body = data[HEADER.size:]
    if len(body) < length:
        raise Truncated(f"payload declares {length} bytes, got {len(body)}")
    if len(body) > length:
        raise Malformed(f"{len(body) - length} trailing bytes after payload")
    try:
        kind = PeripheralKind(kind)
    except ValueError:
        raise Malformed(f"unknown peripheral kind byte {kind:#x}") from None

    if tag == TAG_PRESSURE:
        payload = _decode_pressure(body)
    elif tag == TAG_CANBAND:
        payload = _decode_canband(body)
    elif tag == TAG_HEARTBEAT:
        if length != 0:
            raise Malformed("heartbeat payload must be empty")
        payload = HeartbeatPayload()
    else:
        raise UnknownKind(f"unknown payload tag {tag:#x}")

    return PeripheralPacket(
        id=PeripheralId(kind, instance),
        seq=seq,
        device_time_ms=device_time,
        payload=payload,
    )


def _decode_pressure(body: bytes) -> PressureFramePayload:
    if len(body) < PRESSURE_HEAD.size:
        raise Truncated("pressure payload shorter than its own header")
    rows, cols = PRESSURE_HEAD.unpack_from(body)
    if rows == 0 or cols == 0:
        raise Malformed("grid dimensions must be positive")
    n = rows * cols
    if n > MAX_GRID_CELLS:
        raise Malformed(f"grid {rows}x{cols} exceeds {MAX_GRID_CELLS} cells")
    expected = PRESSURE_HEAD.size + 2 * n
    if len(body) < expected:
        raise Truncated(f"grid needs {expected} payload bytes, got {len(body)}")
    if len(body) > expected:
        raise Malformed("pressure payload longer than rows*cols cells")
    cells = struct.unpack_from(f"<{n}H", body, PRESSURE_HEAD.size)
    try:
        return PressureFramePayload(rows, cols, cells)
    except ValueError as e:
        raise Malformed(str(e)) from None


def _decode_canband(body: bytes) -> CanBandPayload:
    if len(body) < CANBAND_BODY.size:
        raise Truncated(f"can-band payload needs {CANBAND_BODY.size} bytes")
    if len(body) > CANBAND_BODY.size:
        raise Malformed("can-band payload has trailing bytes")
    grip, ax, ay, az, lux, led = CANBAND_BODY.unpack(body)
    if led > 3:
        raise Malformed(f"unknown led state {led}")
    try:
        return CanBandPayload(grip, (ax, ay, az), lux, LedState(led))
    except ValueError as e:
        raise Malformed(str(e)) from None
