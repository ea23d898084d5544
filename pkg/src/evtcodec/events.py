"""Event types, sensor geometry, fixed-window chunking and uniform bin assignment.

Streams are stored column-wise (one numpy array per field) so encoders can
hand them straight to the kernels. Timestamps are integer microseconds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, NamedTuple, Sequence, Tuple

import numpy as np

from .errors import EventError, OutOfWindowError


class Event(NamedTuple):
    t: int
    x: int
    y: int
    p: int


@dataclass(frozen=True)
class SensorGeometry:
    width: int
    height: int

    def __post_init__(self) -> None:
        if int(self.width) < 1 or int(self.height) < 1:
            raise ValueError(f"sensor geometry must be at least 1x1, got {self.width}x{self.height}")


GEN1 = SensorGeometry(304, 240)


@dataclass(frozen=True)
class TimeWindow:
    """Sampling window ``[t_start, t_end]`` split into ``bins`` temporal bins."""

    t_start: int
    t_end: int
    bins: int = 5

    def __post_init__(self) -> None:
        if self.t_end <= self.t_start:
            raise ValueError(f"empty time window [{self.t_start}, {self.t_end}]")
        if self.bins < 1:
            raise ValueError(f"bins must be >= 1, got {self.bins}")

    @property
    def length(self) -> int:
        return self.t_end - self.t_start


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class EventStream:
    """Time-ordered events bound to a sensor geometry.

    Construct with :meth:`from_arrays` or :meth:`from_events`; both validate
    polarity, bounds and timestamp ordering.
    """

    geometry: SensorGeometry
    t: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    p: np.ndarray = field(repr=False)

    @classmethod
    def from_arrays(cls, geometry: SensorGeometry, t, x, y, p) -> "EventStream":
        t = np.ascontiguousarray(t, dtype=np.int64)
        x = np.ascontiguousarray(x, dtype=np.int64)
        y = np.ascontiguousarray(y, dtype=np.int64)
        p = np.ascontiguousarray(p, dtype=np.int64)
        n = t.shape[0]
        if t.ndim != 1 or any(a.shape != (n,) for a in (x, y, p)):
            raise EventError("event field arrays must be 1-D and of equal length")
        validate_events(geometry, t, x, y, p)
        return cls(
            geometry,
            _frozen(t),
            _frozen(x.astype(np.int32)),
            _frozen(y.astype(np.int32)),
            _frozen(p.astype(np.int8)),
        )

    @classmethod
    def from_events(cls, geometry: SensorGeometry, events: Iterable[Sequence[int]]) -> "EventStream":
        rows = [tuple(e) for e in events]
        if not rows:
            return cls.empty(geometry)
        t, x, y, p = zip(*rows)
        return cls.from_arrays(geometry, t, x, y, p)

    @classmethod
    def empty(cls, geometry: SensorGeometry) -> "EventStream":
        z = np.zeros(0, dtype=np.int64)
        return cls.from_arrays(geometry, z, z, z, z)

    def __len__(self) -> int:
        return int(self.t.shape[0])

    def __iter__(self) -> Iterator[Event]:
        for row in zip(self.t.tolist(), self.x.tolist(), self.y.tolist(), self.p.tolist()):
            yield Event(*row)

    def __getitem__(self, item) -> "EventStream":
        if not isinstance(item, slice):
            raise TypeError("EventStream supports slicing only; iterate for single events")
        return EventStream(self.geometry, self.t[item], self.x[item], self.y[item], self.p[item])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EventStream):
            return NotImplemented
        return (
            self.geometry == other.geometry
            and np.array_equal(self.t, other.t)
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.p, other.p)
        )

    def negated(self) -> "EventStream":
        return EventStream(self.geometry, self.t, self.x, self.y, _frozen(-self.p))


def validate_events(geometry: SensorGeometry, t, x, y, p) -> None:
    if t.size == 0:
        return
    bad = np.flatnonzero((p != 1) & (p != -1))
    if bad.size:
        raise EventError(f"event {bad[0]}: polarity must be +1 or -1, got {p[bad[0]]}")
    if t[0] < 0:
        raise EventError(f"event 0: negative timestamp {t[0]}")
    bad = np.flatnonzero(np.diff(t) < 0)
    if bad.size:
        i = bad[0] + 1
        raise EventError(f"event {i}: timestamp {t[i]} precedes {t[i - 1]}")
    check_bounds(geometry, x, y)


def check_bounds(geometry: SensorGeometry, x, y) -> None:
    bad = np.flatnonzero((x < 0) | (x >= geometry.width) | (y < 0) | (y >= geometry.height))
    if bad.size:
        i = bad[0]
        raise EventError(
            f"event {i}: pixel ({x[i]}, {y[i]}) outside {geometry.width}x{geometry.height} sensor"
        )


def assign_bin(t: int, window: TimeWindow) -> int:
    """Uniform temporal bin of timestamp ``t``; the right endpoint lands in the last bin."""
    if not window.t_start <= t <= window.t_end:
        raise OutOfWindowError(f"timestamp {t} outside window [{window.t_start}, {window.t_end}]")
    b = (t - window.t_start) * window.bins // window.length
    return min(b, window.bins - 1)


def assign_bins(t: np.ndarray, window: TimeWindow) -> np.ndarray:
    """Vectorized :func:`assign_bin`."""
    t = np.asarray(t, dtype=np.int64)
    if t.size and (t.min() < window.t_start or t.max() > window.t_end):
        raise OutOfWindowError(f"timestamps outside window [{window.t_start}, {window.t_end}]")
    b = (t - window.t_start) * window.bins // window.length
    return np.minimum(b, window.bins - 1)


def chunk_stream(
    stream: EventStream, window_length: int, bins: int = 5
) -> List[Tuple[EventStream, TimeWindow]]:
    """Split a stream into consecutive half-open windows of ``window_length`` microseconds.

    Windows are anchored at the first event timestamp; empty windows between
    populated ones are kept so chunk indices map to wall-clock time.
    """
    if window_length <= 0:
        raise ValueError(f"window_length must be positive, got {window_length}")
    if len(stream) == 0:
        return []
    t0 = int(stream.t[0])
    n_chunks = (int(stream.t[-1]) - t0) // window_length + 1
    edges = t0 + window_length * np.arange(n_chunks + 1, dtype=np.int64)
    cuts = np.searchsorted(stream.t, edges, side="left")
    out = []
    for k in range(n_chunks):
        lo, hi = int(edges[k]), int(edges[k + 1])
        out.append((stream[cuts[k]:cuts[k + 1]], TimeWindow(lo, hi, bins)))
    return out
