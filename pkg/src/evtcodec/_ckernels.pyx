# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled encoding kernels, twins of ``_pykernels``.

Callers validate bounds and window membership first; nothing is checked here.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport floor

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.int32_t i32
ctypedef cnp.int8_t i8


cdef inline i64 _bin(i64 t, i64 t_start, i64 length, i64 bins) nogil:
    cdef i64 b = (t - t_start) * bins // length
    return bins - 1 if b >= bins else b


def vtei(const i64[::1] t, const i32[::1] x, const i32[::1] y, const i8[::1] p,
         i64 t_start, i64 t_end, int bins, int height, int width):
    out = np.zeros((bins, height, width), dtype=np.int8)
    cdef i8[:, :, ::1] o = out
    cdef Py_ssize_t k, n = t.shape[0]
    cdef i64 length = t_end - t_start
    with nogil:
        for k in range(n):
            o[_bin(t[k], t_start, length, bins), y[k], x[k]] = p[k]
    return out


def shist(const i64[::1] t, const i32[::1] x, const i32[::1] y, const i8[::1] p,
          i64 t_start, i64 t_end, int bins, int height, int width):
    out = np.zeros((2 * bins, height, width), dtype=np.uint8)
    cdef cnp.uint8_t[:, :, ::1] o = out
    cdef Py_ssize_t k, n = t.shape[0]
    cdef i64 length = t_end - t_start
    cdef i64 c
    with nogil:
        for k in range(n):
            c = _bin(t[k], t_start, length, bins)
            if p[k] > 0:
                c += bins
            if o[c, y[k], x[k]] < 255:
                o[c, y[k], x[k]] += 1
    return out


def mdes(const i64[::1] t, const i32[::1] x, const i32[::1] y, const i8[::1] p,
         i64 t_start, i64 t_end, int bins, int height, int width):
    out = np.zeros((bins, height, width), dtype=np.int8)
    last_t = np.full((height, width), -1, dtype=np.int64)
    last_p = np.zeros((height, width), dtype=np.int8)
    cdef i8[:, :, ::1] o = out
    cdef i64[:, ::1] lt = last_t
    cdef i8[:, ::1] lp = last_p
    cdef Py_ssize_t k, n = t.shape[0]
    cdef int i, r, col
    cdef i64 length = t_end - t_start
    cdef i64 elapsed, scale
    with nogil:
        for k in range(n):
            lt[y[k], x[k]] = t[k] - t_start
            lp[y[k], x[k]] = p[k]
        for r in range(height):
            for col in range(width):
                elapsed = lt[r, col]
                if elapsed < 0:
                    continue
                for i in range(bins):
                    scale = (<i64>1) << i
                    if elapsed * scale >= (scale - 1) * length:
                        o[i, r, col] = lp[r, col]
                    else:
                        break
    return out


def voxel(const i64[::1] t, const i32[::1] x, const i32[::1] y, const i8[::1] p,
          i64 t_start, i64 t_end, int bins, int height, int width):
    out = np.zeros((2 * bins, height, width), dtype=np.float32)
    cdef float[:, :, ::1] o = out
    cdef Py_ssize_t k, n = t.shape[0]
    cdef double length = <double>(t_end - t_start)
    cdef double tn, frac
    cdef i64 lo, base
    cdef float w
    # Two passes (left weights, then right weights) so the float32
    # accumulation order matches the numpy kernel exactly.
    with nogil:
        for k in range(n):
            tn = <double>(t[k] - t_start) / length * (bins - 1)
            lo = <i64>floor(tn)
            w = <float>(1.0 - (tn - lo))
            if w > 0:
                base = bins if p[k] > 0 else 0
                o[base + lo, y[k], x[k]] += w
        for k in range(n):
            tn = <double>(t[k] - t_start) / length * (bins - 1)
            lo = <i64>floor(tn)
            w = <float>(tn - lo)
            if w > 0 and lo + 1 < bins:
                base = bins if p[k] > 0 else 0
                o[base + lo + 1, y[k], x[k]] += w
    return out
