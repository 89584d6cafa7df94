"""Direct file: the record key determines the storage slot.

Slot address is simply ``key - base``, so every lookup or store costs
exactly one slot access regardless of occupancy.  The price is that space
must be reserved for the whole admissible key range.  ``residency``
("memory" or "disk") does not change behavior here; it tells the cost
model whether a slot access is a memory read or a disk block read.
"""

from __future__ import annotations

from typing import Any

from locdb.index.stats import AccessStats

__all__ = ["DirectFile"]

_EMPTY = object()


class DirectFile:
    def __init__(self, base: int, capacity: int, residency: str = "memory"):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        if base < 0:
            raise ValueError("base key must be non-negative")
        if residency not in ("memory", "disk"):
            raise ValueError(f"residency must be 'memory' or 'disk', got {residency!r}")
        self.base = base
        self.capacity = capacity
        self.residency = residency
        self._slots: list[Any] = [_EMPTY] * capacity

    def _slot(self, key: int) -> int:
        if not self.base <= key < self.base + self.capacity:
            raise ValueError(
                f"key {key} outside reserved range "
                f"[{self.base}, {self.base + self.capacity})")
        return key - self.base

    def put(self, key: int, entry: Any) -> AccessStats:
        self._slots[self._slot(key)] = entry
        return AccessStats(slot_accesses=1)

    def get(self, key: int) -> tuple[bool, Any, AccessStats]:
        value = self._slots[self._slot(key)]
        stats = AccessStats(slot_accesses=1)
        if value is _EMPTY:
            return False, None, stats
        return True, value, stats

    def remove(self, key: int) -> AccessStats:
        self._slots[self._slot(key)] = _EMPTY
        return AccessStats(slot_accesses=1)

    def occupancy(self) -> int:
        return sum(1 for v in self._slots if v is not _EMPTY)

    def __contains__(self, key: int) -> bool:
        return self.get(key)[0]
