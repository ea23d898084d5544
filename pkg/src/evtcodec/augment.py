"""Tensor-level augmentations for encoded event volumes.

Random polarity suppression (RPS) drops one polarity from the whole volume
with probability ``s``; the positive polarity is the one dropped with
probability ``p``. Horizontal flip and zoom-out are the usual geometric
augmentations. All random choices for a training sequence are drawn once
(:func:`draw_sequence`) and reused for every tensor in it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import AugmentError
from .tensor import DenseTensor, FormatTag

SeedLike = Union[int, np.random.Generator, None]

ZOOM_MIN, ZOOM_MAX = 1.0, 1.2


class RpsBranch(str, enum.Enum):
    IDENTITY = "identity"
    KEEP_POSITIVE_ONLY = "keep_positive_only"
    KEEP_NEGATIVE_ONLY = "keep_negative_only"


@dataclass(frozen=True)
class RpsConfig:
    s: float = 0.05
    p: float = 0.5

    def __post_init__(self) -> None:
        for name in ("s", "p"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise AugmentError(f"RPS probability {name}={v} outside [0, 1]")


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def rps_draw(config: RpsConfig, rng_seed: SeedLike = None) -> RpsBranch:
    """Draw ``r1, r2`` uniformly and pick the suppression branch."""
    r1, r2 = _rng(rng_seed).random(2)
    if r1 >= config.s:
        return RpsBranch.IDENTITY
    if r2 >= config.p:
        return RpsBranch.KEEP_POSITIVE_ONLY
    return RpsBranch.KEEP_NEGATIVE_ONLY


def rps_apply(tensor: DenseTensor, branch) -> DenseTensor:
    branch = RpsBranch(branch)
    if branch is RpsBranch.IDENTITY:
        return tensor
    tag = tensor.format_tag
    data = tensor.data.copy()
    keep_pos = branch is RpsBranch.KEEP_POSITIVE_ONLY
    if tag in (FormatTag.VTEI, FormatTag.MDES):
        data[data < 0 if keep_pos else data > 0] = 0
    elif tag in (FormatTag.SHIST, FormatTag.VOXEL):
        b = tensor.bins
        if keep_pos:
            data[:b] = 0
        else:
            data[b:] = 0
    else:
        raise AugmentError(f"RPS undefined for format {tag!r}")
    return tensor.replace_data(data)


def hflip(tensor: DenseTensor) -> DenseTensor:
    return tensor.replace_data(np.ascontiguousarray(tensor.data[:, :, ::-1]))


def zoomed_shape(height: int, width: int, scale: float) -> Tuple[int, int]:
    return max(1, int(height / scale)), max(1, int(width / scale))


def zoom_out(tensor: DenseTensor, scale: float, offset: Tuple[int, int] = (0, 0)) -> DenseTensor:
    """Shrink the content by ``scale`` (nearest neighbour) onto a blank canvas.

    ``offset`` is the (row, col) of the shrunken content's top-left corner.
    Output dims equal input dims.
    """
    if not ZOOM_MIN <= scale <= ZOOM_MAX:
        raise AugmentError(f"zoom-out scale {scale} outside [{ZOOM_MIN}, {ZOOM_MAX}]")
    _, h, w = tensor.dims
    nh, nw = zoomed_shape(h, w, scale)
    r0, c0 = (int(v) for v in offset)
    if not (0 <= r0 <= h - nh and 0 <= c0 <= w - nw):
        raise AugmentError(f"offset {offset} does not fit a {nh}x{nw} patch in a {h}x{w} canvas")
    rows = np.minimum(((np.arange(nh) + 0.5) * scale).astype(np.int64), h - 1)
    cols = np.minimum(((np.arange(nw) + 0.5) * scale).astype(np.int64), w - 1)
    out = np.zeros_like(tensor.data)
    out[:, r0:r0 + nh, c0:c0 + nw] = tensor.data[:, rows[:, None], cols[None, :]]
    return tensor.replace_data(out)


@dataclass(frozen=True)
class AugSequenceDraw:
    seed: int
    rps_branch: RpsBranch = RpsBranch.IDENTITY
    hflip: bool = False
    zoom_scale: Optional[float] = None
    zoom_offset: Optional[Tuple[int, int]] = None


IDENTITY_DRAW = AugSequenceDraw(seed=0)


def draw_sequence(
    seed: int,
    height: int,
    width: int,
    rps: Optional[RpsConfig] = None,
    hflip_prob: float = 0.0,
    zoom_prob: float = 0.0,
) -> AugSequenceDraw:
    """Draw every augmentation parameter for one sequence from ``seed``."""
    for name, v in (("hflip_prob", hflip_prob), ("zoom_prob", zoom_prob)):
        if not 0.0 <= v <= 1.0:
            raise AugmentError(f"{name}={v} outside [0, 1]")
    rng = np.random.default_rng(seed)
    branch = rps_draw(rps, rng) if rps is not None else RpsBranch.IDENTITY
    flip = bool(rng.random() < hflip_prob)
    scale = offset = None
    if rng.random() < zoom_prob:
        scale = float(rng.uniform(ZOOM_MIN, ZOOM_MAX))
        nh, nw = zoomed_shape(height, width, scale)
        offset = (int(rng.integers(0, height - nh + 1)), int(rng.integers(0, width - nw + 1)))
    return AugSequenceDraw(int(seed), branch, flip, scale, offset)


def apply_draw(tensor: DenseTensor, draw: AugSequenceDraw) -> DenseTensor:
    out = rps_apply(tensor, draw.rps_branch)
    if draw.hflip:
        out = hflip(out)
    if draw.zoom_scale is not None:
        out = zoom_out(out, draw.zoom_scale, draw.zoom_offset or (0, 0))
    return out


def apply_sequence(tensors: Sequence[DenseTensor], draw: AugSequenceDraw) -> List[DenseTensor]:
    if not tensors:
        return []
    ref = tensors[0]
    for i, t in enumerate(tensors):
        if t.format_tag != ref.format_tag or t.dims != ref.dims:
            raise AugmentError(
                f"tensor {i} is {t.format_tag.name} {t.dims}, sequence is {ref.format_tag.name} {ref.dims}"
            )
    return [apply_draw(t, draw) for t in tensors]
