"""Newline-delimited JSON run traces."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass

PHASES = ("TwoPhase", "Outer", "Inner", "FGM", "Cert")


@dataclass(frozen=True)
class TraceEvent:
    phase: str
    depth: int
    tau: float | None
    f_value: float | None
    steps: int
    timestamp: float


class Trace:
    """Collects events in order and optionally appends each one to a stream.

    Only ``FGM`` and ``Cert`` events carry gradient steps, so their sum is
    the run's total step count.
    """

    def __init__(self, stream=None, clock=time.time):
        self.stream = stream
        self.clock = clock
        self.events: list[TraceEvent] = []

    def emit(self, phase: str, depth: int, tau: float | None = None, f_value: float | None = None,
             steps: int = 0) -> TraceEvent:
        if phase not in PHASES:
            raise ValueError(f"unknown trace phase {phase!r}")
        ev = TraceEvent(phase, int(depth), None if tau is None else float(tau),
                        None if f_value is None else float(f_value), int(steps), self.clock())
        self.events.append(ev)
        if self.stream is not None:
            self.stream.write(json.dumps(asdict(ev)) + "\n")
        return ev

    def total_steps(self) -> int:
        return sum(ev.steps for ev in self.events)
