"""Injectable clocks. The engine never reads wall time directly, which keeps
operation sequences replayable: identical ops + identical clock = identical
serialized workspaces.
"""

from __future__ import annotations

import time
from typing import Callable

# A clock is any zero-arg callable returning UTC epoch milliseconds.
Clock = Callable[[], int]


def system_clock() -> int:
    return time.time_ns() // 1_000_000


class FixedClock:
    """Always returns the same instant. Used by replay and tests."""

    def __init__(self, ms: int = 0):
        self.ms = ms

    def __call__(self) -> int:
        return self.ms


class TickingClock:
    """Returns ``start``, then advances by ``step`` per call."""

    def __init__(self, start: int = 0, step: int = 1):
        self.ms = start
        self.step = step

    def __call__(self) -> int:
        now = self.ms
        self.ms += self.step
        return now
