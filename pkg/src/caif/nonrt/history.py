"""O1-style historical performance store.

One writer ingests KPM reports; readers query trailing-window throughput
and the PRB/CQI history used by the feasibility check. Bounded to a ring
of the most recent rows per (cell, slice) scope.
"""

from __future__ import annotations

import json
import threading
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable

from caif.sim.types import KpmReport

DEFAULT_RING_SIZE = 86_400  # one day of 1 s ticks


class NoData(LookupError):
    pass


@dataclass(frozen=True)
class PerfHistoryEntry:
    cell_id: int
    slice_id: int
    prb_allocated: int
    avg_cqi: float
    achieved_throughput_mbps: float
    timestamp: float

    def to_json_dict(self) -> dict:
        return {
            "cell_id": self.cell_id,
            "slice_id": self.slice_id,
            "prb_allocated": self.prb_allocated,
            "avg_cqi": self.avg_cqi,
            "achieved_throughput_mbps": self.achieved_throughput_mbps,
            "timestamp": self.timestamp,
        }


class PerfHistoryStore:
    def __init__(
        self,
        ring_size: int = DEFAULT_RING_SIZE,
        tick_s: float = 1.0,
        persist_path: str | Path | None = None,
    ):
        self._lock = threading.Lock()
        self._rings: dict[tuple[int, int], deque[PerfHistoryEntry]] = {}
        self._ring_size = ring_size
        self._tick_s = tick_s
        self._persist: IO[str] | None = (
            open(persist_path, "a", encoding="utf-8") if persist_path else None
        )

    def ingest_o1(self, reports: Iterable[KpmReport]) -> None:
        """Append one history row per KPM report."""
        with self._lock:
            for report in reports:
                entry = PerfHistoryEntry(
                    cell_id=report.cell_id,
                    slice_id=report.slice_id,
                    prb_allocated=report.prb_used,
                    avg_cqi=report.avg_cqi,
                    achieved_throughput_mbps=report.dl_throughput_mbps,
                    timestamp=report.tick * self._tick_s,
                )
                ring = self._rings.setdefault(
                    (report.cell_id, report.slice_id), deque(maxlen=self._ring_size)
                )
                ring.append(entry)
                if self._persist is not None:
                    self._persist.write(json.dumps(entry.to_json_dict()) + "\n")
            if self._persist is not None:
                self._persist.flush()

    def entries(self, cell_id: int, slice_id: int) -> list[PerfHistoryEntry]:
        with self._lock:
            return list(self._rings.get((cell_id, slice_id), ()))

    def cell_entries(self, cell_id: int) -> list[PerfHistoryEntry]:
        with self._lock:
            out: list[PerfHistoryEntry] = []
            for (cid, _), ring in self._rings.items():
                if cid == cell_id:
                    out.extend(ring)
            out.sort(key=lambda e: (e.timestamp, e.slice_id))
            return out

    def current_throughput(self, cell_id: int, slice_id: int, window_s: float = 60.0) -> float:
        """Arithmetic mean of achieved throughput over the trailing window."""
        with self._lock:
            ring = self._rings.get((cell_id, slice_id))
            if not ring:
                raise NoData(f"no samples for (cell {cell_id}, slice {slice_id})")
            horizon = ring[-1].timestamp - window_s
            samples = [e.achieved_throughput_mbps for e in ring if e.timestamp > horizon]
        if not samples:
            raise NoData(f"no samples in trailing {window_s}s window")
        return sum(samples) / len(samples)

    def close(self) -> None:
        if self._persist is not None:
            self._persist.close()
            self._persist = None
