"""Encoding benchmarks: latency, event rate, non-zeros, COO size, compression ratio, bandwidth.

Sizes are reported in MiB (2**20 bytes). The reference raw size of an event
stream is ``events * raw_event_bytes`` with 4 bytes per event by default.
Bandwidth divides the encoded size by the nominal window length plus the
encoding latency.
"""

from __future__ import annotations

import csv
import io
import json
import statistics
import time
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .coo import coo_encode, layout_for
from .encoders import encode
from .errors import EvtCodecError
from .events import EventStream, TimeWindow, chunk_stream
from .tensor import FormatTag, count_nonzeros

MB = float(1 << 20)
RAW_EVENT_BYTES = 4
SCENARIOS = ("average", "maximum", "minimum")
REPORT_COLUMNS = (
    "format",
    "scenario",
    "events",
    "latency_ms",
    "event_rate_mevs",
    "non_zeros",
    "encoded_mb",
    "compression_ratio",
    "bw_mbs",
)


@dataclass
class EncodingReport:
    format_tag: FormatTag
    events_in_chunk: int
    latency: float  # seconds
    event_rate: float  # events / second
    non_zeros: int
    encoded_bytes: int
    raw_bytes: int
    compression_ratio: Optional[float]
    bandwidth: Optional[float]  # bytes / second
    window_length: float  # seconds
    scenario: Optional[str] = None
    latency_samples: List[float] = field(default_factory=list)

    @property
    def event_rate_mevs(self) -> float:
        return self.event_rate / 1e6

    @property
    def encoded_mb(self) -> float:
        return self.encoded_bytes / MB

    @property
    def bandwidth_mbs(self) -> Optional[float]:
        return None if self.bandwidth is None else self.bandwidth / MB

    def row(self) -> Dict[str, object]:
        return {
            "format": self.format_tag.name.lower(),
            "scenario": self.scenario or "",
            "events": self.events_in_chunk,
            "latency_ms": self.latency * 1e3,
            "event_rate_mevs": self.event_rate_mevs,
            "non_zeros": self.non_zeros,
            "encoded_mb": self.encoded_mb,
            "compression_ratio": self.compression_ratio,
            "bw_mbs": self.bandwidth_mbs,
        }


def compute_sizes(
    non_zeros: int,
    record_bytes: int,
    events: int,
    raw_event_bytes: int = RAW_EVENT_BYTES,
    window_length: float = 0.05,
    latency: float = 0.0,
) -> Tuple[int, Optional[float], Optional[float]]:
    """Return ``(encoded_bytes, compression_ratio, bandwidth_bytes_per_s)``.

    Ratio and bandwidth are ``None`` when nothing was encoded.
    """
    encoded = int(non_zeros) * int(record_bytes)
    if encoded == 0:
        return 0, None, None
    ratio = events * raw_event_bytes / encoded
    bandwidth = encoded / (window_length + latency)
    return encoded, ratio, bandwidth


def event_rate(events: int, latency: float) -> float:
    if events == 0 or latency <= 0:
        return 0.0
    return events / latency


def make_report(
    tag,
    events: int,
    non_zeros: int,
    latency: float,
    record_bytes: int,
    window_length: float,
    raw_event_bytes: int = RAW_EVENT_BYTES,
    scenario: Optional[str] = None,
    latency_samples: Sequence[float] = (),
) -> EncodingReport:
    encoded, ratio, bw = compute_sizes(non_zeros, record_bytes, events, raw_event_bytes, window_length, latency)
    return EncodingReport(
        format_tag=FormatTag.parse(tag),
        events_in_chunk=int(events),
        latency=float(latency),
        event_rate=event_rate(events, latency),
        non_zeros=int(non_zeros),
        encoded_bytes=encoded,
        raw_bytes=int(events) * raw_event_bytes,
        compression_ratio=ratio,
        bandwidth=bw,
        window_length=window_length,
        scenario=scenario,
        latency_samples=list(latency_samples),
    )


def time_encode(chunk: EventStream, window: TimeWindow, tag, repetitions: int = 11, backend=None):
    """Median wall-clock seconds over ``repetitions`` runs after one discarded warm-up run."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    tensor = encode(chunk, window, tag, backend=backend)
    samples = []
    for _ in range(repetitions):
        start = time.perf_counter()
        encode(chunk, window, tag, backend=backend)
        samples.append(time.perf_counter() - start)
    return tensor, statistics.median(samples), samples


def measure_encode(
    chunk: EventStream,
    window: TimeWindow,
    format_tag,
    repetitions: int = 11,
    raw_event_bytes: int = RAW_EVENT_BYTES,
    backend=None,
) -> EncodingReport:
    tag = FormatTag.parse(format_tag)
    tensor, latency, samples = time_encode(chunk, window, tag, repetitions, backend)
    nz = count_nonzeros(tensor)
    record_bytes = layout_for(tag, chunk.geometry, window.bins).record_bytes
    report = make_report(
        tag, len(chunk), nz, latency, record_bytes, window.length / 1e6, raw_event_bytes, latency_samples=samples
    )
    coo_bytes = coo_encode(tensor).nbytes
    if coo_bytes != report.encoded_bytes:
        raise AssertionError(f"COO payload {coo_bytes} B disagrees with size model {report.encoded_bytes} B")
    return report


@dataclass
class BenchSummary:
    scenarios: Dict[str, List[EncodingReport]]
    chunk_events: Dict[str, int]
    total_chunks: int

    def reports(self) -> List[EncodingReport]:
        return [r for name in SCENARIOS for r in self.scenarios.get(name, [])]

    def to_csv(self) -> str:
        return reports_to_csv(self.reports())

    def to_json(self) -> str:
        doc = {
            "total_chunks": self.total_chunks,
            "scenarios": {
                name: {
                    "events": self.chunk_events[name],
                    "formats": {
                        r.format_tag.name.lower(): dict(r.row(), latency_samples_s=r.latency_samples)
                        for r in reps
                    },
                }
                for name, reps in self.scenarios.items()
            },
        }
        return json.dumps(doc, indent=2)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def reports_to_csv(reports: Iterable[EncodingReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for r in reports:
        row = r.row()
        writer.writerow([_fmt(row[c]) for c in REPORT_COLUMNS])
    return buf.getvalue()


def select_scenarios(event_counts: Sequence[int]) -> Dict[str, int]:
    """Chunk indices of the average, maximum and minimum scenarios.

    Empty chunks are skipped; the average scenario is the chunk whose count is
    nearest the mean, first index winning ties.
    """
    counts = np.asarray(event_counts, dtype=np.int64)
    live = np.flatnonzero(counts > 0)
    if live.size == 0:
        raise EvtCodecError("corpus has no non-empty chunk")
    c = counts[live]
    mean = c.mean()
    return {
        "average": int(live[np.argmin(np.abs(c - mean))]),
        "maximum": int(live[np.argmax(c)]),
        "minimum": int(live[np.argmin(c)]),
    }


def bench_corpus(
    streams: Sequence[EventStream],
    window_length: int = 50_000,
    formats: Sequence = tuple(FormatTag),
    repetitions: int = 11,
    bins: int = 5,
    raw_event_bytes: int = RAW_EVENT_BYTES,
    backend=None,
) -> BenchSummary:
    chunks = [c for s in streams for c in chunk_stream(s, window_length, bins)]
    if not chunks:
        raise EvtCodecError("empty corpus")
    picks = select_scenarios([len(c) for c, _ in chunks])
    scenarios = {}
    for name in SCENARIOS:
        chunk, window = chunks[picks[name]]
        reps = []
        for tag in formats:
            r = measure_encode(chunk, window, tag, repetitions, raw_event_bytes, backend)
            r.scenario = name
            reps.append(r)
        scenarios[name] = reps
    return BenchSummary(scenarios, {k: len(chunks[i][0]) for k, i in picks.items()}, len(chunks))


def replay_counts(
    rows: Iterable[Dict[str, str]],
    geometry,
    bins: int = 5,
    window_length: int = 50_000,
    raw_event_bytes: int = RAW_EVENT_BYTES,
) -> List[EncodingReport]:
    """Rebuild reports from recorded ``format,scenario,events,non_zeros,latency_ms`` rows.

    Used to regenerate the derived size, ratio and bandwidth columns without
    re-running encoders or depending on machine timing.
    """
    out = []
    for lineno, row in enumerate(rows, start=2):
        try:
            tag = FormatTag.parse(row["format"])
            events = int(row["events"])
            nz = int(row["non_zeros"])
            latency = float(row["latency_ms"]) / 1e3
        except (KeyError, ValueError) as exc:
            raise EvtCodecError(f"counts line {lineno}: {exc}") from None
        rb = layout_for(tag, geometry, bins).record_bytes
        out.append(
            make_report(tag, events, nz, latency, rb, window_length / 1e6, raw_event_bytes, row.get("scenario") or None)
        )
    return out
