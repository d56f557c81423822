"""Per-workspace push channel.

Each subscriber gets every record published after it joined, in publication
order, at most once. Records are plain dicts with a channel-assigned ``seq``.
"""

from __future__ import annotations

import json
import queue
import threading
from typing import Any, Iterator


class EventBus:
    def __init__(self):
        self._lock = threading.Lock()
        self._seq = 0
        self._subscribers: list[queue.Queue] = []

    def publish(self, record: dict[str, Any]) -> int:
        with self._lock:
            self._seq += 1
            record = {"seq": self._seq, **record}
            targets = list(self._subscribers)
        for q in targets:
            q.put(record)
        return record["seq"]

    def subscribe(self) -> "Subscription":
        q: queue.Queue = queue.Queue()
        with self._lock:
            self._subscribers.append(q)
        return Subscription(self, q)

    def _unsubscribe(self, q: queue.Queue) -> None:
        with self._lock:
            if q in self._subscribers:
                self._subscribers.remove(q)


class Subscription:
    def __init__(self, bus: EventBus, q: queue.Queue):
        self._bus = bus
        self._queue = q

    def get(self, timeout: float | None = None) -> dict[str, Any] | None:
        try:
            return self._queue.get(timeout=timeout)
        except queue.Empty:
            return None

    def close(self) -> None:
        self._bus._unsubscribe(self._queue)

    def __enter__(self) -> "Subscription":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def sse_lines(self, poll_s: float = 0.5) -> Iterator[str]:
        """Frame records as server-sent events, with comment heartbeats while
        idle so stalled consumers are detected."""
        try:
            while True:
                record = self.get(timeout=poll_s)
                if record is None:
                    yield ": ping\n\n"
                    continue
                kind = record.get("type", "message")
                yield f"event: {kind}\ndata: {json.dumps(record, sort_keys=True)}\n\n"
        finally:
            self.close()
