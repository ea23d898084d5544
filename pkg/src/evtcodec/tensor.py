"""Dense encoded tensors and their format metadata."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .events import SensorGeometry, TimeWindow


class FormatTag(enum.IntEnum):
    VTEI = 0
    SHIST = 1
    MDES = 2
    VOXEL = 3

    @classmethod
    def parse(cls, name) -> "FormatTag":
        if isinstance(name, cls):
            return name
        key = str(name).strip().upper().replace("-", "").replace("_", "")
        if key in ("VOXELGRID", "VOXEL"):
            return cls.VOXEL
        try:
            return cls[key]
        except KeyError:
            raise ValueError(f"unknown format {name!r}; expected one of vtei, shist, mdes, voxel") from None

    @property
    def polarity_channels(self) -> bool:
        """True when polarities live in separate channel groups (2B channels)."""
        return self in (FormatTag.SHIST, FormatTag.VOXEL)

    @property
    def signed(self) -> bool:
        return self in (FormatTag.VTEI, FormatTag.MDES)


class DType(enum.IntEnum):
    TERNARY_INT8 = 0
    COUNT_UINT8 = 1
    FLOAT32 = 2

    @property
    def numpy(self) -> np.dtype:
        return np.dtype(_NUMPY_DTYPES[self])


_NUMPY_DTYPES = {DType.TERNARY_INT8: np.int8, DType.COUNT_UINT8: np.uint8, DType.FLOAT32: np.float32}

FORMAT_DTYPE = {
    FormatTag.VTEI: DType.TERNARY_INT8,
    FormatTag.MDES: DType.TERNARY_INT8,
    FormatTag.SHIST: DType.COUNT_UINT8,
    FormatTag.VOXEL: DType.FLOAT32,
}


def channels_for(tag: FormatTag, bins: int) -> int:
    return 2 * bins if tag.polarity_channels else bins


@dataclass(frozen=True, eq=False)
class DenseTensor:
    """A ``C x H x W`` encoded volume.

    For SHIST and VOXEL the channel axis is polarity-major: channels ``[0, B)``
    hold negative events and ``[B, 2B)`` positive ones. ``data`` is read-only.
    """

    data: np.ndarray = field(repr=False)
    format_tag: FormatTag
    window: TimeWindow
    geometry: SensorGeometry

    def __post_init__(self) -> None:
        expected = (channels_for(self.format_tag, self.window.bins), self.geometry.height, self.geometry.width)
        if self.data.shape != expected:
            raise ValueError(f"{self.format_tag.name} tensor must have dims {expected}, got {self.data.shape}")
        if self.data.dtype != self.dtype.numpy:
            raise ValueError(f"{self.format_tag.name} tensor must be {self.dtype.numpy}, got {self.data.dtype}")
        if self.data.flags.writeable:
            data = np.ascontiguousarray(self.data)
            if data is self.data:
                data = data.view()
            data.flags.writeable = False
            object.__setattr__(self, "data", data)

    @property
    def dtype(self) -> DType:
        return FORMAT_DTYPE[self.format_tag]

    @property
    def dims(self) -> Tuple[int, int, int]:
        return tuple(self.data.shape)

    @property
    def bins(self) -> int:
        return self.window.bins

    def replace_data(self, data: np.ndarray) -> "DenseTensor":
        return DenseTensor(data, self.format_tag, self.window, self.geometry)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseTensor):
            return NotImplemented
        return (
            self.format_tag == other.format_tag
            and self.window == other.window
            and self.geometry == other.geometry
            and np.array_equal(self.data, other.data)
        )


def count_nonzeros(tensor: DenseTensor) -> int:
    return int(np.count_nonzero(tensor.data))
