"""Event chunk to dense tensor encoders.

``encode_vtei``   last-event polarity per uniform temporal bin, B x H x W, ternary
``encode_shist``  per-polarity event counts per bin, 2B x H x W, saturating at 255
``encode_mdes``   last-event polarity in trailing sub-windows of length T / 2**i
``encode_voxel``  bilinear temporal kernel weights per polarity, 2B x H x W float32
"""

from __future__ import annotations

from typing import Callable, Dict, Optional

from . import _backend
from .errors import EncodeError, EventError
from .events import EventStream, TimeWindow, check_bounds
from .tensor import DenseTensor, FormatTag, count_nonzeros

__all__ = [
    "encode",
    "encode_vtei",
    "encode_shist",
    "encode_mdes",
    "encode_voxel",
    "count_nonzeros",
    "ENCODERS",
]


def _prepare(chunk: EventStream, window: TimeWindow):
    if len(chunk):
        t0, t1 = int(chunk.t[0]), int(chunk.t[-1])
        if t0 < window.t_start or t1 > window.t_end:
            raise EncodeError(
                f"chunk spans [{t0}, {t1}] which leaves window [{window.t_start}, {window.t_end}]"
            )
        try:
            check_bounds(chunk.geometry, chunk.x, chunk.y)
        except EventError as exc:
            raise EncodeError(str(exc)) from None
    g = chunk.geometry
    return (chunk.t, chunk.x, chunk.y, chunk.p, window.t_start, window.t_end, window.bins, g.height, g.width)


def _run(name: str, tag: FormatTag, chunk: EventStream, window: TimeWindow, backend: Optional[str]):
    args = _prepare(chunk, window)
    data = getattr(_backend.get_kernels(backend), name)(*args)
    return DenseTensor(data, tag, window, chunk.geometry)


def encode_vtei(chunk: EventStream, window: TimeWindow, backend: Optional[str] = None) -> DenseTensor:
    """Volume of ternary event images.

    Each (bin, pixel) cell holds the polarity of the last event that falls in
    it, 0 where no event fell. Equal timestamps resolve by stream order.
    """
    return _run("vtei", FormatTag.VTEI, chunk, window, backend)


def encode_shist(chunk: EventStream, window: TimeWindow, backend: Optional[str] = None) -> DenseTensor:
    return _run("shist", FormatTag.SHIST, chunk, window, backend)


def encode_mdes(chunk: EventStream, window: TimeWindow, backend: Optional[str] = None) -> DenseTensor:
    """Mixed-density event stack.

    Bin ``i`` covers the trailing sub-window ``[t_end - T / 2**i, t_end]``, so
    bin 0 is the whole window and every later bin halves the span.
    """
    if window.length * (1 << (window.bins - 1)) >= 1 << 62:
        raise EncodeError(f"{window.bins} MDES bins over a {window.length} us window overflow 64-bit arithmetic")
    return _run("mdes", FormatTag.MDES, chunk, window, backend)


def encode_voxel(chunk: EventStream, window: TimeWindow, backend: Optional[str] = None) -> DenseTensor:
    """Voxel grid with a bilinear temporal kernel.

    Timestamps are normalized so the window maps onto ``[0, B - 1]``; each
    event spreads unit weight over the two nearest bins of its polarity group.
    """
    if window.bins < 2:
        raise EncodeError("voxel grid needs at least 2 bins")
    return _run("voxel", FormatTag.VOXEL, chunk, window, backend)


ENCODERS: Dict[FormatTag, Callable[..., DenseTensor]] = {
    FormatTag.VTEI: encode_vtei,
    FormatTag.SHIST: encode_shist,
    FormatTag.MDES: encode_mdes,
    FormatTag.VOXEL: encode_voxel,
}


def encode(chunk: EventStream, window: TimeWindow, fmt, backend: Optional[str] = None) -> DenseTensor:
    return ENCODERS[FormatTag.parse(fmt)](chunk, window, backend=backend)
