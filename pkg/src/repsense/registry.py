"""Hub-side registry of connected peripherals.

Peripherals enroll themselves on first contact and are never configured by
hand; liveness is judged from receipt timestamps, with a short stale timeout
for "sensor quiet" feedback and a longer one before a device counts as gone.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .wire import PeripheralId, PeripheralPacket


class PeripheralStatus(Enum):
    ACTIVE = "active"
    STALE = "stale"
    DEPARTED = "departed"


class IngestVerdict(Enum):
    FRESH = "fresh"
    DUPLICATE = "duplicate"
    REORDERED = "reordered"


@dataclass(frozen=True, slots=True)
class RegistryEntry:
    id: PeripheralId
    last_seq: int
    last_seen: float
    status: PeripheralStatus


@dataclass(frozen=True, slots=True)
class StatusTransition:
    id: PeripheralId
    old: PeripheralStatus | None  # None on first enrollment
    new: PeripheralStatus
    at: float


class Registry:
    """Single-writer registry; readers get immutable snapshots."""

    def __init__(self, stale_timeout_s: float = 5.0, depart_timeout_s: float = 60.0):
        if depart_timeout_s <= stale_timeout_s:
            raise ValueError("departure timeout must exceed stale timeout")
        self.stale_timeout_s = stale_timeout_s
        self.depart_timeout_s = depart_timeout_s
        self._entries: dict[PeripheralId, RegistryEntry] = {}

    def ingest(
        self, packet: PeripheralPacket, now: float
    ) -> tuple[IngestVerdict, StatusTransition | None]:
        """Record a decoded packet. Total: every packet yields a verdict."""
        entry = self._entries.get(packet.id)
        if entry is None:
            self._entries[packet.id] = RegistryEntry(
                packet.id, packet.seq, now, PeripheralStatus.ACTIVE
            )
            return IngestVerdict.FRESH, StatusTransition(
                packet.id, None, PeripheralStatus.ACTIVE, now
            )

        if packet.seq > entry.last_seq:
            verdict = IngestVerdict.FRESH
            last_seq = packet.seq
        elif packet.seq == entry.last_seq:
            verdict = IngestVerdict.DUPLICATE
            last_seq = entry.last_seq
        else:
            verdict = IngestVerdict.REORDERED
            last_seq = entry.last_seq

        transition = None
        if entry.status is not PeripheralStatus.ACTIVE:
            transition = StatusTransition(
                packet.id, entry.status, PeripheralStatus.ACTIVE, now
            )
        self._entries[packet.id] = replace(
            entry, last_seq=last_seq, last_seen=now, status=PeripheralStatus.ACTIVE
        )
        return verdict, transition

    def sweep(self, now: float) -> list[StatusTransition]:
        """Age entries past their timeouts; returns the transitions that fired."""
        transitions = []
        for pid, entry in self._entries.items():
            age = now - entry.last_seen
            if age > self.depart_timeout_s:
                target = PeripheralStatus.DEPARTED
            elif age > self.stale_timeout_s:
                target = PeripheralStatus.STALE
            else:
                target = PeripheralStatus.ACTIVE
            if target is not entry.status:
                transitions.append(StatusTransition(pid, entry.status, target, now))
                self._entries[pid] = replace(entry, status=target)
        return transitions

    def get(self, pid: PeripheralId) -> RegistryEntry | None:
        return self._entries.get(pid)

    def snapshot(self) -> list[RegistryEntry]:
        return sorted(
            self._entries.values(), key=lambda e: (e.id.kind, e.id.instance)
        )

    def __len__(self) -> int:
        return len(self._entries)
