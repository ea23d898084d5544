"""Event and tensor file formats.

All binary formats are little-endian; byte layouts are documented in
FORMATS.md. Readers reject structurally invalid input; the only accepted
normalization is CSV polarity 0 read as -1.
"""

from __future__ import annotations

import csv
import os
import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .coo import CooBuffer, layout_for
from .errors import EventError, FormatError
from .events import EventStream, SensorGeometry, TimeWindow
from .tensor import DType, DenseTensor, FormatTag, FORMAT_DTYPE

PathLike = Union[str, os.PathLike]

EVB_MAGIC = b"EVB1"
ETN_MAGIC = b"ETN1"
ECO_MAGIC = b"ECO1"
CSV_HEADER = ("t_us", "x", "y", "p")

EVB_HEADER = struct.Struct("<4sHHQ")
EVB_RECORD = np.dtype([("t", "<u8"), ("x", "<u2"), ("y", "<u2"), ("p", "i1"), ("pad", "u1", (3,))])
ETN_FIXED = struct.Struct("<4sBBB")
ETN_TAIL = struct.Struct("<QQHH")
ECO_HEADER = struct.Struct("<4sBBHHQQQB")


# -- events ------------------------------------------------------------------


def write_events_csv(path: PathLike, stream: EventStream) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(zip(stream.t.tolist(), stream.x.tolist(), stream.y.tolist(), stream.p.tolist()))


def read_events_csv(path: PathLike, geometry: SensorGeometry) -> EventStream:
    t, x, y, p = [], [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
            raise FormatError(f"{path}:1: expected header {','.join(CSV_HEADER)}")
        prev = None
        for row in reader:
            line = reader.line_num
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 4:
                raise FormatError(f"{path}:{line}: expected 4 fields, got {len(row)}")
            try:
                ti, xi, yi, pi = (int(v) for v in row)
            except ValueError:
                raise FormatError(f"{path}:{line}: non-integer field in {row}") from None
            if pi == 0:
                pi = -1
            if pi not in (-1, 1):
                raise FormatError(f"{path}:{line}: polarity {pi} not in {{-1, 0, 1}}")
            if ti < 0 or (prev is not None and ti < prev):
                raise FormatError(f"{path}:{line}: timestamp {ti} out of order")
            if not (0 <= xi < geometry.width and 0 <= yi < geometry.height):
                raise FormatError(
                    f"{path}:{line}: pixel ({xi}, {yi}) outside {geometry.width}x{geometry.height} sensor"
                )
            prev = ti
            t.append(ti)
            x.append(xi)
            y.append(yi)
            p.append(pi)
    return EventStream.from_arrays(geometry, t, x, y, p)


def encode_evb(stream: EventStream) -> bytes:
    g = stream.geometry
    if g.width > 0xFFFF or g.height > 0xFFFF:
        raise FormatError("EVB1 geometry limited to 65535 pixels per side")
    rec = np.zeros(len(stream), dtype=EVB_RECORD)
    rec["t"], rec["x"], rec["y"], rec["p"] = stream.t, stream.x, stream.y, stream.p
    return EVB_HEADER.pack(EVB_MAGIC, g.width, g.height, len(stream)) + rec.tobytes()


def decode_evb(blob: bytes, source: str = "<bytes>") -> EventStream:
    if len(blob) < EVB_HEADER.size:
        raise FormatError(f"{source}: truncated EVB1 header")
    magic, width, height, count = EVB_HEADER.unpack_from(blob)
    if magic != EVB_MAGIC:
        raise FormatError(f"{source}: bad magic {magic!r}, expected {EVB_MAGIC!r}")
    expected = EVB_HEADER.size + count * EVB_RECORD.itemsize
    if len(blob) != expected:
        raise FormatError(f"{source}: header declares {count} events ({expected} bytes), file has {len(blob)}")
    try:
        geometry = SensorGeometry(width, height)
    except ValueError as exc:
        raise FormatError(f"{source}: {exc}") from None
    rec = np.frombuffer(blob, dtype=EVB_RECORD, offset=EVB_HEADER.size)
    bad = np.flatnonzero(rec["pad"].any(axis=1))
    if bad.size:
        raise FormatError(f"{source}: record {bad[0]} has non-zero padding")
    if count and rec["t"].max() >= 1 << 63:
        raise FormatError(f"{source}: timestamp exceeds signed 64-bit range")
    try:
        return EventStream.from_arrays(
            geometry, rec["t"].astype(np.int64), rec["x"], rec["y"], rec["p"]
        )
    except EventError as exc:
        raise FormatError(f"{source}: {exc}") from None


def write_events_evb(path: PathLike, stream: EventStream) -> None:
    Path(path).write_bytes(encode_evb(stream))


def read_events_evb(path: PathLike) -> EventStream:
    return decode_evb(Path(path).read_bytes(), str(path))


def read_dat(path: PathLike, geometry: Optional[SensorGeometry] = None) -> EventStream:
    """Placeholder for vendor recordings (Prophesee .dat/.raw, DAVIS .aedat).

    A native reader would plug in here and return a validated EventStream;
    until then convert recordings to CSV or EVB1 with the vendor tools.
    """
    raise FormatError(f"{path}: vendor event containers are not supported; convert to CSV or EVB1 first")


_VENDOR_SUFFIXES = {".dat", ".raw", ".aedat", ".aedat4"}


def detect_event_format(path: PathLike) -> str:
    p = Path(path)
    with open(p, "rb") as fh:
        head = fh.read(4)
    if head == EVB_MAGIC:
        return "evb"
    if p.suffix.lower() in _VENDOR_SUFFIXES:
        return "vendor"
    if p.suffix.lower() in (".evb", ".evb1"):
        return "evb"
    return "csv"


def read_events(path: PathLike, fmt: Optional[str] = None, geometry: Optional[SensorGeometry] = None) -> EventStream:
    """Read an event file, detecting the format by magic bytes then extension.

    CSV files carry no geometry, so ``geometry`` is required for them.
    """
    fmt = fmt or detect_event_format(path)
    if fmt == "evb":
        stream = read_events_evb(path)
        if geometry is not None and stream.geometry != geometry:
            raise FormatError(
                f"{path}: file geometry {stream.geometry.width}x{stream.geometry.height} "
                f"differs from requested {geometry.width}x{geometry.height}"
            )
        return stream
    if fmt == "csv":
        if geometry is None:
            raise FormatError(f"{path}: CSV event files need an explicit sensor geometry")
        return read_events_csv(path, geometry)
    if fmt == "vendor":
        return read_dat(path, geometry)
    raise FormatError(f"{path}: unknown event format {fmt!r}")


def write_events(path: PathLike, stream: EventStream, fmt: Optional[str] = None) -> None:
    fmt = fmt or ("csv" if Path(path).suffix.lower() == ".csv" else "evb")
    if fmt == "csv":
        write_events_csv(path, stream)
    elif fmt == "evb":
        write_events_evb(path, stream)
    else:
        raise FormatError(f"unknown event format {fmt!r}")


# -- tensors -----------------------------------------------------------------


def encode_etn(tensor: DenseTensor) -> bytes:
    g, w = tensor.geometry, tensor.window
    dims = tensor.dims
    parts = [
        ETN_FIXED.pack(ETN_MAGIC, int(tensor.dtype), int(tensor.format_tag), len(dims)),
        struct.pack(f"<{len(dims)}I", *dims),
        ETN_TAIL.pack(w.t_start, w.t_end, g.width, g.height),
        np.ascontiguousarray(tensor.data, dtype=tensor.data.dtype.newbyteorder("<")).tobytes(),
    ]
    return b"".join(parts)


def decode_etn(blob: bytes, source: str = "<bytes>") -> DenseTensor:
    if len(blob) < ETN_FIXED.size:
        raise FormatError(f"{source}: truncated ETN1 header")
    magic, dtype_code, tag_code, ndim = ETN_FIXED.unpack_from(blob)
    if magic != ETN_MAGIC:
        raise FormatError(f"{source}: bad magic {magic!r}, expected {ETN_MAGIC!r}")
    try:
        dtype, tag = DType(dtype_code), FormatTag(tag_code)
    except ValueError as exc:
        raise FormatError(f"{source}: {exc}") from None
    if FORMAT_DTYPE[tag] != dtype:
        raise FormatError(f"{source}: dtype {dtype.name} does not match format {tag.name}")
    if ndim != 3:
        raise FormatError(f"{source}: expected 3 dims, header declares {ndim}")
    off = ETN_FIXED.size
    need = off + 4 * ndim + ETN_TAIL.size
    if len(blob) < need:
        raise FormatError(f"{source}: truncated ETN1 header")
    dims = struct.unpack_from(f"<{ndim}I", blob, off)
    t_start, t_end, width, height = ETN_TAIL.unpack_from(blob, off + 4 * ndim)
    n_chan = dims[0]
    bins = n_chan // 2 if tag.polarity_channels else n_chan
    payload = len(blob) - need
    expected = int(np.prod(dims, dtype=np.int64)) * dtype.numpy.itemsize
    if payload != expected:
        raise FormatError(f"{source}: payload is {payload} bytes, dims {dims} need {expected}")
    try:
        window = TimeWindow(t_start, t_end, bins)
        geometry = SensorGeometry(width, height)
        data = np.frombuffer(blob, dtype=dtype.numpy.newbyteorder("<"), offset=need).reshape(dims)
        return DenseTensor(data.astype(dtype.numpy), tag, window, geometry)
    except ValueError as exc:
        raise FormatError(f"{source}: {exc}") from None


def write_tensor(path: PathLike, tensor: DenseTensor) -> None:
    Path(path).write_bytes(encode_etn(tensor))


def read_tensor(path: PathLike) -> DenseTensor:
    return decode_etn(Path(path).read_bytes(), str(path))


# -- COO buffers ---------------------------------------------------------------


def encode_eco(buf: CooBuffer) -> bytes:
    g, w = buf.geometry, buf.window
    head = ECO_HEADER.pack(
        ECO_MAGIC, int(buf.format_tag), w.bins, g.width, g.height, w.t_start, w.t_end,
        buf.record_count, buf.layout.record_bytes,
    )
    return head + buf.payload


def decode_eco(blob: bytes, source: str = "<bytes>") -> CooBuffer:
    if len(blob) < ECO_HEADER.size:
        raise FormatError(f"{source}: truncated ECO1 header")
    magic, tag_code, bins, width, height, t_start, t_end, count, rec_bytes = ECO_HEADER.unpack_from(blob)
    if magic != ECO_MAGIC:
        raise FormatError(f"{source}: bad magic {magic!r}, expected {ECO_MAGIC!r}")
    try:
        tag = FormatTag(tag_code)
        geometry = SensorGeometry(width, height)
        window = TimeWindow(t_start, t_end, bins)
    except ValueError as exc:
        raise FormatError(f"{source}: {exc}") from None
    layout = layout_for(tag, geometry, bins)
    if layout.record_bytes != rec_bytes:
        raise FormatError(f"{source}: record size {rec_bytes} disagrees with layout ({layout.record_bytes})")
    payload = blob[ECO_HEADER.size:]
    if len(payload) != count * rec_bytes:
        raise FormatError(f"{source}: {count} records need {count * rec_bytes} bytes, found {len(payload)}")
    return CooBuffer(layout, tag, geometry, window, count, bytes(payload))


def write_coo(path: PathLike, buf: CooBuffer) -> None:
    Path(path).write_bytes(encode_eco(buf))


def read_coo(path: PathLike) -> CooBuffer:
    return decode_eco(Path(path).read_bytes(), str(path))


# -- display -----------------------------------------------------------------

_SIGNED_GRAY = np.array([0, 128, 255], dtype=np.uint8)


def grayscale(tensor: DenseTensor, channel: int) -> np.ndarray:
    """8-bit view of one channel: -1 -> 0, 0 -> 128, +1 -> 255 for signed formats."""
    plane = tensor.data[channel]
    if tensor.format_tag.signed:
        return _SIGNED_GRAY[plane.astype(np.int64) + 1]
    plane = plane.astype(np.float64)
    top = plane.max()
    if top <= 0:
        return np.zeros(plane.shape, dtype=np.uint8)
    return np.round(255 * plane / top).astype(np.uint8)


def write_pgm(path: PathLike, tensor: DenseTensor, channel: int) -> None:
    img = grayscale(tensor, channel)
    h, w = img.shape
    Path(path).write_bytes(b"P5\n%d %d\n255\n" % (w, h) + img.tobytes())
