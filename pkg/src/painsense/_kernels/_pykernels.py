"""Numpy implementations of the hot kernels.

Used when the compiled extension is unavailable or disabled with
``PAINSENSE_PURE_PYTHON=1``. Signatures and results match ``_ckernels``.
"""
import numpy as np

SPLITMIX_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _extreme_indices(rows):
    imin = np.argmin(rows, axis=1)
    imax = np.argmax(rows, axis=1)
    # imin == imax only for all-equal rows; any other index is then a valid max
    same = imin == imax
    imax[same] = np.where(imin[same] == 0, 1, 0)
    return imin, imax


def trimmed_mean_rows(rows):
    n_rows, n = rows.shape
    imin, imax = _extreme_indices(rows)
    keep = np.ones(rows.shape, dtype=bool)
    r = np.arange(n_rows)
    keep[r, imin] = False
    keep[r, imax] = False
    return np.where(keep, rows, 0.0).sum(axis=1) / (n - 2)


def trimmed_mean(values):
    return float(trimmed_mean_rows(values.reshape(1, -1))[0])


def moving_average(values, width):
    n = values.shape[0]
    if n == 0 or width == 1:
        return values.copy()
    half = width // 2
    acc = np.zeros(n)
    count = np.zeros(n)
    for off in range(-half, half + 1):
        lo = max(0, -off)
        hi = min(n, n - off)
        if hi <= lo:
            continue
        acc[lo:hi] += values[lo + off:hi + off]
        count[lo:hi] += 1.0
    return np.clip(acc / count, values.min(), values.max())


def splitmix64_block(state, n):
    """Return ``n`` outputs starting after ``state`` and the advanced state."""
    steps = np.arange(1, n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(state) + steps * SPLITMIX_GAMMA
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        z = z ^ (z >> np.uint64(31))
    new_state = (state + n * 0x9E3779B97F4A7C15) & _MASK64
    return z, new_state


def partition_codes(codes):
    n, m = codes.shape
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    if m == 0:
        return np.zeros(n, dtype=np.int64)
    _, first, inverse = np.unique(codes, axis=0, return_index=True, return_inverse=True)
    rank = np.empty(first.shape[0], dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(first.shape[0])
    return rank[inverse.reshape(-1)]
