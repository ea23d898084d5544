"""Pure numpy encoding kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and bit-identical output. Inputs are pre-validated: ``t`` int64, ``x``/``y``
int32, ``p`` int8, all events inside the window and the sensor.
"""

import numpy as np


def _bins(t, t_start, t_end, bins):
    b = (t - t_start) * bins // (t_end - t_start)
    return np.minimum(b, bins - 1)


def _last_per_cell(flat):
    """Index of the last occurrence of each distinct cell in ``flat``."""
    rev = flat[::-1]
    cells, first = np.unique(rev, return_index=True)
    return cells, flat.shape[0] - 1 - first


def vtei(t, x, y, p, t_start, t_end, bins, height, width):
    out = np.zeros(bins * height * width, dtype=np.int8)
    if t.shape[0]:
        flat = (_bins(t, t_start, t_end, bins) * height + y) * width + x
        cells, last = _last_per_cell(flat)
        out[cells] = p[last]
    return out.reshape(bins, height, width)


def shist(t, x, y, p, t_start, t_end, bins, height, width):
    size = 2 * bins * height * width
    if not t.shape[0]:
        return np.zeros((2 * bins, height, width), dtype=np.uint8)
    chan = _bins(t, t_start, t_end, bins) + bins * (p > 0)
    flat = (chan * height + y) * width + x
    counts = np.bincount(flat, minlength=size)
    return np.minimum(counts, 255).astype(np.uint8).reshape(2 * bins, height, width)


def mdes(t, x, y, p, t_start, t_end, bins, height, width):
    out = np.zeros((bins, height * width), dtype=np.int8)
    if t.shape[0]:
        pix, last = _last_per_cell(y.astype(np.int64) * width + x)
        elapsed = t[last] - t_start
        length = t_end - t_start
        for i in range(bins):
            # trailing sub-window of length T / 2**i: elapsed >= T - T / 2**i
            scale = 1 << i
            keep = elapsed * scale >= (scale - 1) * length
            out[i, pix[keep]] = p[last[keep]]
    return out.reshape(bins, height, width)


def voxel(t, x, y, p, t_start, t_end, bins, height, width):
    out = np.zeros(2 * bins * height * width, dtype=np.float32)
    if t.shape[0]:
        tn = (t - t_start).astype(np.float64) / float(t_end - t_start) * (bins - 1)
        lo = np.floor(tn).astype(np.int64)
        frac = tn - lo
        base = (bins * (p > 0)).astype(np.int64)
        pix = y.astype(np.int64) * width + x
        plane = height * width
        w = (1.0 - frac).astype(np.float32)
        m = w > 0
        np.add.at(out, ((base + lo) * plane + pix)[m], w[m])
        w = frac.astype(np.float32)
        m = (w > 0) & (lo + 1 < bins)
        np.add.at(out, ((base + lo + 1) * plane + pix)[m], w[m])
    return out.reshape(2 * bins, height, width)
