"""Coordinate-list compression of encoded tensors.

Each non-zero cell becomes one fixed-width record. Bit fields are packed
least-significant first in the order x, y, bin, channel, data and the record
is stored little-endian in ``record_bytes`` bytes. Field widths:

* x, y, bin: ``ceil(log2(extent))`` bits (0 bits for an extent of 1)
* channel: 1 bit for the polarity-split formats (SHIST, VOXEL), else 0
* data: 1 bit for VTEI/MDES (0 = -1, 1 = +1), 8 for SHIST counts,
  16 for VOXEL half-precision floats

At the GEN1 geometry (304 x 240, 5 bins) this gives 3, 4, 3 and 5 bytes per
record for VTEI, SHIST, MDES and VOXEL. Records are ordered by
(channel, bin, y, x), which is the row-major order of the tensor itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CodecError
from .events import SensorGeometry, TimeWindow
from .tensor import DenseTensor, FormatTag, channels_for

DATA_BITS = {FormatTag.VTEI: 1, FormatTag.MDES: 1, FormatTag.SHIST: 8, FormatTag.VOXEL: 16}


def _bits_for(extent: int) -> int:
    return (int(extent) - 1).bit_length()


@dataclass(frozen=True)
class CooLayout:
    x_bits: int
    y_bits: int
    bin_bits: int
    channel_bits: int
    data_bits: int

    @property
    def total_bits(self) -> int:
        return self.x_bits + self.y_bits + self.bin_bits + self.channel_bits + self.data_bits

    @property
    def record_bytes(self) -> int:
        return -(-self.total_bits // 8)

    @property
    def shifts(self):
        """Bit offsets of the x, y, bin, channel and data fields."""
        s_y = self.x_bits
        s_bin = s_y + self.y_bits
        s_ch = s_bin + self.bin_bits
        s_data = s_ch + self.channel_bits
        return 0, s_y, s_bin, s_ch, s_data


def layout_for(format_tag, geometry: SensorGeometry, bins: int) -> CooLayout:
    tag = FormatTag.parse(format_tag)
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    layout = CooLayout(
        x_bits=_bits_for(geometry.width),
        y_bits=_bits_for(geometry.height),
        bin_bits=_bits_for(bins),
        channel_bits=1 if tag.polarity_channels else 0,
        data_bits=DATA_BITS[tag],
    )
    if layout.total_bits > 64:
        raise CodecError(f"record of {layout.total_bits} bits exceeds the 64-bit packing limit")
    return layout


@dataclass(frozen=True)
class CooBuffer:
    layout: CooLayout
    format_tag: FormatTag
    geometry: SensorGeometry
    window: TimeWindow
    record_count: int
    payload: bytes

    def __post_init__(self) -> None:
        if len(self.payload) != self.record_count * self.layout.record_bytes:
            raise CodecError(
                f"payload of {len(self.payload)} bytes does not hold "
                f"{self.record_count} records of {self.layout.record_bytes} bytes"
            )

    @property
    def nbytes(self) -> int:
        return len(self.payload)


def _data_field(tag: FormatTag, values: np.ndarray) -> np.ndarray:
    if tag.signed:
        if np.any((values != 1) & (values != -1)):
            bad = values[(values != 1) & (values != -1)][0]
            raise CodecError(f"{tag.name} tensor holds non-ternary value {bad}")
        return (values > 0).astype(np.uint64)
    if tag is FormatTag.SHIST:
        return values.astype(np.uint64)
    with np.errstate(over="ignore"):
        half = values.astype(np.float16)
    if not np.all(np.isfinite(half)):
        raise CodecError("voxel value overflows half precision")
    if np.any(half == 0):
        raise CodecError("voxel value underflows to zero in half precision")
    return half.view(np.uint16).astype(np.uint64)


def coo_encode(tensor: DenseTensor) -> CooBuffer:
    tag = tensor.format_tag
    layout = layout_for(tag, tensor.geometry, tensor.bins)
    flat = tensor.data.reshape(-1)
    idx = np.flatnonzero(flat)
    data = _data_field(tag, flat[idx])

    h, w = tensor.geometry.height, tensor.geometry.width
    bins = tensor.bins
    idx = idx.astype(np.uint64)
    x = idx % np.uint64(w)
    y = (idx // np.uint64(w)) % np.uint64(h)
    c = idx // np.uint64(h * w)
    b = c % np.uint64(bins)
    ch = c // np.uint64(bins)

    s_x, s_y, s_b, s_c, s_d = (np.uint64(s) for s in layout.shifts)
    word = x << s_x | y << s_y | b << s_b | ch << s_c | data << s_d
    raw = word.astype("<u8").view(np.uint8).reshape(-1, 8)[:, : layout.record_bytes]
    return CooBuffer(layout, tag, tensor.geometry, tensor.window, int(idx.size), raw.tobytes())


def coo_decode(buf: CooBuffer) -> DenseTensor:
    tag, layout = buf.format_tag, buf.layout
    if layout != layout_for(tag, buf.geometry, buf.window.bins):
        raise CodecError(f"layout {layout} does not match {tag.name} at this geometry")
    h, w, bins = buf.geometry.height, buf.geometry.width, buf.window.bins
    n_chan = channels_for(tag, bins)
    dtype = {FormatTag.VTEI: np.int8, FormatTag.MDES: np.int8, FormatTag.SHIST: np.uint8}.get(tag, np.float32)
    out = np.zeros(n_chan * h * w, dtype=dtype)
    n = buf.record_count
    if n:
        raw = np.zeros((n, 8), dtype=np.uint8)
        raw[:, : layout.record_bytes] = np.frombuffer(buf.payload, dtype=np.uint8).reshape(n, layout.record_bytes)
        word = raw.view("<u8").reshape(n)

        def field(shift, bits):
            return (word >> np.uint64(shift)) & np.uint64((1 << bits) - 1)

        s_x, s_y, s_b, s_c, s_d = layout.shifts
        x = field(s_x, layout.x_bits)
        y = field(s_y, layout.y_bits)
        b = field(s_b, layout.bin_bits)
        ch = field(s_c, layout.channel_bits)
        data = field(s_d, layout.data_bits)
        if layout.total_bits < 64 and np.any(word >> np.uint64(layout.total_bits)):
            raise CodecError("record carries bits beyond its layout")
        for name, val, lim in (("x", x, w), ("y", y, h), ("bin", b, bins)):
            bad = np.flatnonzero(val >= np.uint64(lim))
            if bad.size:
                raise CodecError(f"record {bad[0]}: {name}={val[bad[0]]} outside extent {lim}")
        idx = ((ch * np.uint64(bins) + b) * np.uint64(h) + y) * np.uint64(w) + x
        bad = np.flatnonzero(np.diff(idx.astype(np.int64)) <= 0)
        if bad.size:
            raise CodecError(f"record {bad[0] + 1}: out of order or duplicate coordinate")
        if tag.signed:
            values = np.where(data == 1, 1, -1).astype(np.int8)
        elif tag is FormatTag.SHIST:
            values = data.astype(np.uint8)
        else:
            values = data.astype(np.uint16).view(np.float16).astype(np.float32)
        if not tag.signed and np.any(values == 0):
            raise CodecError("record stores a zero value")
        if tag is FormatTag.VOXEL and not np.all(np.isfinite(values)):
            raise CodecError("record stores a non-finite voxel value")
        out[idx.astype(np.int64)] = values
    return DenseTensor(out.reshape(n_chan, h, w), tag, buf.window, buf.geometry)
