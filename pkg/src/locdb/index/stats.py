"""Instrumentation counters shared by the index structures."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class AccessStats:
    """Counts of the primitive operations one probe performed.

    ``nodes_visited`` and ``comparisons`` are filled by tree searches,
    ``slot_accesses`` by direct-file operations.  A cost model converts
    these counts into time.
    """

    nodes_visited: int = 0
    comparisons: int = 0
    slot_accesses: int = 0

    def __post_init__(self) -> None:
        if min(self.nodes_visited, self.comparisons, self.slot_accesses) < 0:
            raise ValueError("access counters must be non-negative")
