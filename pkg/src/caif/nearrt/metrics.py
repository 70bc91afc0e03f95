"""KPIMON metrics database: per-scope ring buffers of KPM reports."""

from __future__ import annotations

import bisect
import threading
from collections import deque
from typing import Iterable

from caif.sim.types import KpmReport

DEFAULT_RING_SIZE = 7_200


class MetricsDb:
    """One writer (KPIMON ingest), many concurrent readers.

    Reports are kept ordered by tick per (cell_id, slice_id) scope.
    """

    def __init__(self, ring_size: int = DEFAULT_RING_SIZE):
        self._lock = threading.Lock()
        self._rings: dict[tuple[int, int], deque[KpmReport]] = {}
        self._ring_size = ring_size

    def kpimon_ingest(self, reports: Iterable[KpmReport]) -> None:
        with self._lock:
            for report in reports:
                ring = self._rings.setdefault(
                    (report.cell_id, report.slice_id), deque(maxlen=self._ring_size)
                )
                if ring and report.tick < ring[-1].tick:
                    # out-of-order delivery: keep the ring tick-sorted
                    items = list(ring)
                    bisect.insort(items, report, key=lambda r: r.tick)
                    ring.clear()
                    ring.extend(items[-self._ring_size :])
                else:
                    ring.append(report)

    def latest(self, cell_id: int, slice_id: int) -> KpmReport | None:
        with self._lock:
            ring = self._rings.get((cell_id, slice_id))
            return ring[-1] if ring else None

    def window(self, cell_id: int, slice_id: int, n: int) -> list[KpmReport]:
        with self._lock:
            ring = self._rings.get((cell_id, slice_id))
            if not ring:
                return []
            return list(ring)[-n:]

    def scopes(self) -> list[tuple[int, int]]:
        with self._lock:
            return sorted(self._rings.keys())
