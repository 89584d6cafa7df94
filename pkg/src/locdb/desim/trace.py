"""Flow traces: the ordered database/register touches of one event.

A trace records what a single location update, call delivery, or handoff
did, step by step.  Traces are the unit of verification for the delay
decompositions and the protocol properties, and they share one
line-delimited text format across the simulator and the overlap module:

    time,level,node_id,event_kind,queue_len
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

__all__ = ["TraceStep", "FlowTrace", "TRACE_HEADER"]

TRACE_HEADER = "time,level,node_id,event_kind,queue_len"


@dataclass(frozen=True)
class TraceStep:
    time: float
    level: str        # "db0" | "db1" | "db2" | "vlr" | "nlr" | "hlr" | ...
    node_id: str
    kind: str         # e.g. "enqueue" | "finish" | "register" | "pointer_create"
    queue_len: int = 0

    def to_line(self) -> str:
        return f"{self.time!r},{self.level},{self.node_id},{self.kind},{self.queue_len}"


@dataclass
class FlowTrace:
    steps: list[TraceStep] = field(default_factory=list)

    def append(self, time: float, level: str, node_id, kind: str,
               queue_len: int = 0) -> None:
        self.steps.append(TraceStep(time, level, str(node_id), kind, queue_len))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def kinds(self) -> list[str]:
        return [s.kind for s in self.steps]

    def levels(self) -> list[str]:
        return [s.level for s in self.steps]

    def count_level(self, level: str) -> int:
        return sum(1 for s in self.steps if s.level == level)

    def count_kind(self, kind: str) -> int:
        return sum(1 for s in self.steps if s.kind == kind)

    def is_time_ordered(self) -> bool:
        times = [s.time for s in self.steps]
        return all(a <= b for a, b in zip(times, times[1:]))

    def to_lines(self) -> list[str]:
        return [s.to_line() for s in self.steps]


def write_trace_lines(path, traces: Iterable[FlowTrace]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(TRACE_HEADER + "\n")
        for trace in traces:
            for line in trace.to_lines():
                fh.write(line + "\n")
