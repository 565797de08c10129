"""Hot numerical kernels with a compiled core and a numpy fallback.

The compiled extension ``_ckernels`` is used when it was built at install
time. Set ``PAINSENSE_PURE_PYTHON=1`` to force the fallback. ``BACKEND``
names the active implementation.
"""
import os

import numpy as np

from . import _pykernels

_impl = _pykernels
BACKEND = "python"

if os.environ.get("PAINSENSE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def available_backends():
    """Names of every importable kernel implementation."""
    names = ["python"]
    try:
        from . import _ckernels  # noqa: F401

        names.append("cython")
    except ImportError:
        pass
    return names


def get_backend(name):
    """Return the kernel module for ``name`` ("python" or "cython")."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


def trimmed_mean(values) -> float:
    arr = np.ascontiguousarray(values, dtype=np.float64)
    # summation rounding must not leave [min, max]
    return min(max(float(_impl.trimmed_mean(arr)), float(arr.min())), float(arr.max()))


def trimmed_mean_rows(rows) -> np.ndarray:
    arr = np.ascontiguousarray(rows, dtype=np.float64)
    if arr.shape[0] == 0:
        return np.zeros(0)
    return np.clip(_impl.trimmed_mean_rows(arr), arr.min(axis=1), arr.max(axis=1))


def moving_average(values, width: int) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.float64)
    return _impl.moving_average(arr, int(width))


def splitmix64_block(state: int, n: int):
    return _impl.splitmix64_block(int(state), int(n))


def partition_codes(codes) -> np.ndarray:
    arr = np.ascontiguousarray(codes, dtype=np.int64)
    return _impl.partition_codes(arr)
