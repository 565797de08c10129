# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled hot kernels. Behaviour mirrors ``_pykernels``."""
import numpy as np

from libc.stdint cimport int64_t, uint64_t
from libcpp.unordered_map cimport unordered_map
from cython.operator cimport dereference as deref

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX2 = 0x94D049BB133111EBULL


cdef inline double _trimmed(const double* x, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t j, imin = 0, imax = 0
    cdef double s = 0.0
    for j in range(1, n):
        if x[j] < x[imin]:
            imin = j
        if x[j] > x[imax]:
            imax = j
    if imin == imax:
        imax = 1 if imin == 0 else 0
    for j in range(n):
        if j != imin and j != imax:
            s += x[j]
    return s / (n - 2)


def trimmed_mean_rows(const double[:, ::1] rows):
    cdef Py_ssize_t r, n_rows = rows.shape[0], n = rows.shape[1]
    out = np.empty(n_rows, dtype=np.float64)
    cdef double[::1] o = out
    if n_rows == 0:
        return out
    with nogil:
        for r in range(n_rows):
            o[r] = _trimmed(&rows[r, 0], n)
    return out


def trimmed_mean(const double[::1] values):
    return _trimmed(&values[0], values.shape[0])


def moving_average(const double[::1] values, Py_ssize_t width):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t half = width // 2
    cdef Py_ssize_t i, j, lo, hi
    cdef double s, lo_val, hi_val
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    if n == 0:
        return out
    if width == 1:
        o[:] = values
        return out
    lo_val = values[0]
    hi_val = values[0]
    for i in range(1, n):
        if values[i] < lo_val:
            lo_val = values[i]
        if values[i] > hi_val:
            hi_val = values[i]
    with nogil:
        for i in range(n):
            lo = i - half if i >= half else 0
            hi = i + half + 1 if i + half + 1 < n else n
            s = 0.0
            for j in range(lo, hi):
                s += values[j]
            s = s / (hi - lo)
            if s < lo_val:
                s = lo_val
            elif s > hi_val:
                s = hi_val
            o[i] = s
    return out


def splitmix64_block(uint64_t state, Py_ssize_t n):
    """Return ``n`` outputs starting after ``state`` and the advanced state."""
    out = np.empty(n, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    cdef uint64_t z
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            state += GAMMA
            z = state
            z = (z ^ (z >> 30)) * MIX1
            z = (z ^ (z >> 27)) * MIX2
            o[i] = z ^ (z >> 31)
    return out, int(state)


def partition_codes(const int64_t[:, ::1] codes):
    cdef Py_ssize_t n = codes.shape[0], m = codes.shape[1]
    cdef Py_ssize_t i, j
    cdef int64_t key, radix, next_id = 0
    cdef unordered_map[int64_t, int64_t] seen
    cdef unordered_map[int64_t, int64_t].iterator it
    out = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] o = out
    if n == 0 or m == 0:
        return out
    radices = np.asarray(codes).max(axis=0).astype(object) + 1
    if any(c < 0 for c in np.asarray(codes).min(axis=0)) or _product(radices) >= 2 ** 62:
        from ._pykernels import partition_codes as fallback
        return fallback(np.asarray(codes))
    cdef int64_t[::1] rad = np.asarray(radices, dtype=np.int64)
    with nogil:
        for i in range(n):
            key = 0
            for j in range(m):
                key = key * rad[j] + codes[i, j]
            it = seen.find(key)
            if it == seen.end():
                seen[key] = next_id
                o[i] = next_id
                next_id += 1
            else:
                o[i] = deref(it).second
    return out


def _product(values):
    p = 1
    for v in values:
        p *= int(v)
    return p
