"""EMG windowing and per-window feature extraction.

Samples are grouped into tumbling windows. Each window yields a trimmed
mean of the raw ADC readings (one minimum and one maximum removed) plus the
mean and peak of the optionally filtered and amplified signal.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import ConfigError, WindowSizeError

ADC_MAX = 1023


@dataclass(frozen=True, slots=True)
class EmgSample:
    seq: int
    t_ms: int
    adc: int

    def __post_init__(self):
        if not 0 <= self.adc <= ADC_MAX:
            raise ValueError(f"adc {self.adc} outside 0..{ADC_MAX}")


@dataclass(frozen=True)
class Window:
    """A run of ``sample_count`` consecutive samples.

    The span is half-open, ``[start_ms, end_ms)``; ``end_ms`` is one sample
    period past the last sample.
    """

    window_id: int
    start_ms: int
    end_ms: int
    samples: tuple[EmgSample, ...]

    def __post_init__(self):
        if len(self.samples) < 3:
            raise WindowSizeError(f"window {self.window_id} has {len(self.samples)} samples, need >= 3")

    @property
    def values(self) -> np.ndarray:
        return np.fromiter((s.adc for s in self.samples), dtype=np.float64, count=len(self.samples))

    def __len__(self):
        return len(self.samples)


@dataclass(frozen=True)
class WindowFeatures:
    window_id: int
    min_value: float
    max_value: float
    sum: float
    average_value: float
    mean_emg: float
    peak_emg: float


@dataclass(frozen=True)
class SignalConfig:
    sample_count: int = 32
    filter_window: int = 1
    gain: float = 1.0

    def __post_init__(self):
        if int(self.sample_count) != self.sample_count or self.sample_count < 3:
            raise ConfigError(f"sample_count must be an integer >= 3, got {self.sample_count}", "sample_count")
        _check_filter_window(self.filter_window)
        _check_gain(self.gain)


def _check_filter_window(k):
    if int(k) != k or k < 1 or k % 2 == 0:
        raise ConfigError(f"filter_window must be an odd integer >= 1, got {k}", "filter_window")


def _check_gain(gain):
    if not gain > 0:
        raise ConfigError(f"gain must be > 0, got {gain}", "gain")


def window_span(times: Sequence[int]) -> tuple[int, int]:
    """Half-open ``[start, end)`` span of a window given its sample times."""
    first, last = int(times[0]), int(times[-1])
    step = max(1, round((last - first) / (len(times) - 1)))
    return first, last + step


def window_stream(samples: Sequence[EmgSample], sample_count: int) -> tuple[list[Window], int]:
    """Split ``samples`` into tumbling windows.

    Returns the windows and the number of trailing samples that did not
    fill a whole window.
    """
    if int(sample_count) != sample_count or sample_count < 3:
        raise ConfigError(f"sample_count must be an integer >= 3, got {sample_count}", "sample_count")
    samples = list(samples)
    n_windows = len(samples) // sample_count
    windows = []
    for w in range(n_windows):
        chunk = tuple(samples[w * sample_count:(w + 1) * sample_count])
        start, end = window_span([s.t_ms for s in chunk])
        windows.append(Window(w, start, end, chunk))
    return windows, len(samples) - n_windows * sample_count


def trimmed_average(window: Window | Sequence[float]) -> float:
    """Mean after dropping one minimum and one maximum sample.

    >>> trimmed_average([1, 2, 3, 4, 5])
    3.0
    """
    values = window.values if isinstance(window, Window) else np.asarray(window, dtype=np.float64)
    if values.ndim != 1 or values.shape[0] < 3:
        raise WindowSizeError(f"trimmed average needs >= 3 samples, got {values.shape[0] if values.ndim else 0}")
    return _kernels.trimmed_mean(values)


def trimmed_average_rows(rows) -> np.ndarray:
    """Row-wise trimmed averages of a 2-D array of equal-length windows."""
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[1] < 3:
        raise WindowSizeError("trimmed average needs rows of >= 3 samples")
    return _kernels.trimmed_mean_rows(rows)


def filter_signal(values: Sequence[float], filter_window: int) -> np.ndarray:
    """Centered moving average; the window shrinks at the sequence edges."""
    _check_filter_window(filter_window)
    return _kernels.moving_average(values, filter_window)


def amplify(values: Sequence[float], gain: float) -> np.ndarray:
    _check_gain(gain)
    return np.asarray(values, dtype=np.float64) * gain


def extract_features(window: Window, config: SignalConfig = SignalConfig()) -> WindowFeatures:
    raw = window.values
    if raw.shape[0] < 3:
        raise WindowSizeError(f"window {window.window_id} has {raw.shape[0]} samples, need >= 3")
    # the trimmed average reads raw samples; filtering only feeds mean/peak
    average = _kernels.trimmed_mean(raw)
    amplified = amplify(filter_signal(raw, config.filter_window), config.gain)
    peak = float(amplified.max())
    # rounding in the sum can push the mean an ulp outside [min, max]
    mean = min(max(float(amplified.mean()), float(amplified.min())), peak)
    return WindowFeatures(
        window_id=window.window_id,
        min_value=float(raw.min()),
        max_value=float(raw.max()),
        sum=float(raw.sum()),
        average_value=average,
        mean_emg=mean,
        peak_emg=peak,
    )
