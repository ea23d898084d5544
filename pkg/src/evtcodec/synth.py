"""Deterministic synthetic event streams.

A log-intensity field is sampled on a fixed tick grid. Each pixel keeps a
reference level; whenever the field moves at least ``contrast`` away from it
the pixel fires one event per threshold crossing (positive for brightening)
and the reference follows by the same number of steps.
"""

from __future__ import annotations

import math
from typing import Callable, Dict

import numpy as np

from .events import EventStream, SensorGeometry

PATTERNS = ("moving-bar", "moving-dot", "static-noise")


def _moving_bar(geometry: SensorGeometry, rng: np.random.Generator, noise: float):
    w, h = geometry.width, geometry.height
    xs = np.arange(w, dtype=np.float64)
    sigma = max(1.0, w / 40.0)

    def field(u: float) -> np.ndarray:
        cx = -3 * sigma + u * (w + 6 * sigma)
        row = np.log(0.2 + np.exp(-0.5 * ((xs - cx) / sigma) ** 2))
        out = np.broadcast_to(row, (h, w))
        return out + rng.normal(0.0, noise, (h, w)) if noise else out.copy()

    return field


def _moving_dot(geometry: SensorGeometry, rng: np.random.Generator, noise: float):
    w, h = geometry.width, geometry.height
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    sigma = max(1.0, min(w, h) / 20.0)
    phase = rng.uniform(0, 2 * math.pi)

    def field(u: float) -> np.ndarray:
        a = phase + 2 * math.pi * u
        cx = (w - 1) / 2 + 0.35 * w * math.cos(a)
        cy = (h - 1) / 2 + 0.35 * h * math.sin(a)
        out = np.log(0.2 + np.exp(-0.5 * ((xx - cx) ** 2 + (yy - cy) ** 2) / sigma**2))
        return out + rng.normal(0.0, noise, (h, w)) if noise else out

    return field


def _static_noise(geometry: SensorGeometry, rng: np.random.Generator, noise: float):
    shape = (geometry.height, geometry.width)
    sigma = max(noise, 0.1)
    return lambda u: np.log(0.5) + rng.normal(0.0, sigma, shape)


_FIELDS: Dict[str, Callable] = {
    "moving-bar": _moving_bar,
    "moving-dot": _moving_dot,
    "static-noise": _static_noise,
}


def synth_events(
    geometry: SensorGeometry,
    duration_us: int,
    pattern: str = "moving-bar",
    contrast: float = 0.2,
    seed: int = 0,
    tick_us: int = 1000,
    noise: float = 0.01,
) -> EventStream:
    """Simulate ``duration_us`` microseconds of a threshold-triggered sensor."""
    if pattern not in _FIELDS:
        raise ValueError(f"unknown pattern {pattern!r}; choose from {', '.join(PATTERNS)}")
    if duration_us <= 0 or tick_us <= 0:
        raise ValueError("duration_us and tick_us must be positive")
    if not contrast > 0:
        raise ValueError(f"contrast threshold must be positive, got {contrast}")
    rng = np.random.default_rng(seed)
    field = _FIELDS[pattern](geometry, rng, noise)

    ref = field(0.0)
    ts, xs, ys, ps = [], [], [], []
    for t in range(tick_us, duration_us, tick_us):
        level = field(t / duration_us)
        diff = level - ref
        steps = np.floor(np.abs(diff) / contrast).astype(np.int64)
        fired = np.flatnonzero(steps)
        if fired.size == 0:
            continue
        n = steps.reshape(-1)[fired]
        sign = np.sign(diff.reshape(-1)[fired]).astype(np.int8)
        ref.reshape(-1)[fired] += sign * n * contrast
        pix = np.repeat(fired, n)
        ts.append(np.full(pix.size, t, dtype=np.int64))
        ys.append(pix // geometry.width)
        xs.append(pix % geometry.width)
        ps.append(np.repeat(sign, n))
    if not ts:
        return EventStream.empty(geometry)
    return EventStream.from_arrays(
        geometry, np.concatenate(ts), np.concatenate(xs), np.concatenate(ys), np.concatenate(ps)
    )
