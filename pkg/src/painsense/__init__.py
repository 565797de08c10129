"""Sensor-stream pain detection: trimmed-mean EMG features, rough-set
attribute weighting and screening, simulated therapy commands, and group
statistics."""
from ._kernels import BACKEND as KERNEL_BACKEND
from .errors import ArgumentError, ConfigError, DegenerateDataError, PainsenseError, WindowSizeError

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "ArgumentError",
    "ConfigError",
    "DegenerateDataError",
    "PainsenseError",
    "WindowSizeError",
]
