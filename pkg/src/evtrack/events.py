"""Event containers: a scalar tuple for single events and a columnar array
form used everywhere performance matters."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np


class Event(NamedTuple):
    """One sensor event: timestamp (s), pixel coordinates, polarity in {-1, +1}."""

    t: float
    x: float
    y: float
    polarity: int = 1


@dataclass(frozen=True)
class EventArray:
    """Column-wise event batch; all arrays share length."""

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    polarity: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "t", np.ascontiguousarray(self.t, dtype=float))
        object.__setattr__(self, "x", np.ascontiguousarray(self.x, dtype=float))
        object.__setattr__(self, "y", np.ascontiguousarray(self.y, dtype=float))
        object.__setattr__(self, "polarity", np.ascontiguousarray(self.polarity, dtype=np.int8))
        n = len(self.t)
        if not (len(self.x) == len(self.y) == len(self.polarity) == n):
            raise ValueError("event columns must share length")

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, idx) -> "EventArray":
        return EventArray(self.t[idx], self.x[idx], self.y[idx], self.polarity[idx])

    def __iter__(self):
        for i in range(len(self)):
            yield Event(self.t[i], self.x[i], self.y[i], int(self.polarity[i]))

    @staticmethod
    def empty() -> "EventArray":
        z = np.empty(0)
        return EventArray(z, z, z, np.empty(0, dtype=np.int8))

    @staticmethod
    def concat(parts: Iterable["EventArray"]) -> "EventArray":
        parts = [p for p in parts if len(p)]
        if not parts:
            return EventArray.empty()
        return EventArray(
            np.concatenate([p.t for p in parts]),
            np.concatenate([p.x for p in parts]),
            np.concatenate([p.y for p in parts]),
            np.concatenate([p.polarity for p in parts]),
        )


def as_event_array(events) -> EventArray:
    """Accepts an EventArray or any iterable of Event-like tuples."""
    if isinstance(events, EventArray):
        return events
    rows = [Event(*e) for e in events]
    if not rows:
        return EventArray.empty()
    return EventArray(
        np.array([e.t for e in rows]),
        np.array([e.x for e in rows]),
        np.array([e.y for e in rows]),
        np.array([e.polarity for e in rows], dtype=np.int8),
    )
