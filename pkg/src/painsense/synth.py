"""Deterministic synthetic device sessions with ground-truth pain labels.

All randomness comes from a splitmix64 stream seeded by ``SynthConfig.seed``,
drawn in a fixed order:

1. two draws per EMG sample, in sample order: noise, then spike;
2. two draws per episode, in episode order: button compliance, then
   button time offset.

A draw ``z`` becomes a uniform real ``u = (z >> 11) * 2**-53`` in [0, 1).
Noise is the integer ``min(floor(u * (2A + 1)), 2A) - A`` for amplitude
``A``; a spike fires when ``u < spike_prob``. The same config therefore
yields a byte-identical serialized stream on every platform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import ConfigError
from .frames import ButtonFrame, EmgFrame, Frame, ImuFrame
from .signal import ADC_MAX, window_span

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
IMU_PERIOD_MS = 100
BUTTON_JITTER_MS = 500
# baseline + intensity at or above these ADC levels maps to button 2 and 3
BUTTON_LEVEL_EDGES = (400, 700)


class SplitMix64:
    """64-bit splitmix generator (Steele, Lea and Flood constants)."""

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def block(self, n: int) -> np.ndarray:
        """Next ``n`` outputs as a uint64 array."""
        out, self.state = _kernels.splitmix64_block(self.state, n)
        return out

    def floats(self, n: int) -> np.ndarray:
        return (self.block(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53


@dataclass(frozen=True)
class Episode:
    start_ms: int
    end_ms: int
    intensity_adc: int


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    duration_ms: int = 60_000
    emg_rate_hz: int = 100
    baseline_adc: int = 120
    noise_amp: int = 15
    episodes: tuple[Episode, ...] = ()
    spike_prob: float = 0.01
    spike_adc: int = 1000
    button_compliance: float = 0.9

    def __post_init__(self):
        object.__setattr__(self, "episodes", tuple(self.episodes))
        if not 0 <= self.seed <= _MASK64:
            raise ConfigError("seed must be an unsigned 64-bit integer", "seed")
        if self.duration_ms <= 0:
            raise ConfigError("duration_ms must be positive", "duration_ms")
        if not 0 < self.emg_rate_hz <= 1000:
            raise ConfigError("emg_rate_hz must lie in (0, 1000]", "emg_rate_hz")
        if not 0 <= self.baseline_adc <= ADC_MAX:
            raise ConfigError(f"baseline_adc must lie in 0..{ADC_MAX}", "baseline_adc")
        if self.noise_amp < 0:
            raise ConfigError("noise_amp must be non-negative", "noise_amp")
        if self.spike_adc < 0:
            raise ConfigError("spike_adc must be non-negative", "spike_adc")
        for name in ("spike_prob", "button_compliance"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]", name)
        ordered = sorted(self.episodes, key=lambda e: e.start_ms)
        for ep in ordered:
            if not 0 <= ep.start_ms < ep.end_ms <= self.duration_ms:
                raise ConfigError(f"episode {ep} must satisfy 0 <= start < end <= duration_ms", "episodes")
            if ep.intensity_adc < 0:
                raise ConfigError(f"episode {ep} has negative intensity", "episodes")
        for a, b in zip(ordered, ordered[1:]):
            if b.start_ms < a.end_ms:
                raise ConfigError(f"episodes {a} and {b} overlap", "episodes")


@dataclass(frozen=True)
class GroundTruth:
    labels: tuple[int, ...]
    episode_ids: tuple[tuple[int, ...], ...]
    spans: tuple[tuple[int, int], ...] = field(default=())

    def to_csv(self) -> str:
        return "window_id,label\n" + "".join(f"{i},{lab}\n" for i, lab in enumerate(self.labels))

    @classmethod
    def from_csv(cls, text: str) -> "GroundTruth":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != "window_id,label":
            raise ValueError("ground truth CSV must start with 'window_id,label'")
        labels = []
        for i, ln in enumerate(lines[1:]):
            wid, lab = ln.split(",")
            if int(wid) != i or lab not in ("0", "1"):
                raise ValueError(f"bad ground truth row {ln!r}")
            labels.append(int(lab))
        return cls(tuple(labels), tuple(() for _ in labels))


def sample_times(config: SynthConfig) -> np.ndarray:
    n = config.duration_ms * config.emg_rate_hz // 1000
    return np.arange(n, dtype=np.int64) * 1000 // config.emg_rate_hz


def button_level(intensity_adc: int, baseline_adc: int) -> int:
    total = baseline_adc + intensity_adc
    return 1 + sum(total >= edge for edge in BUTTON_LEVEL_EDGES)


def label_windows(times: Sequence[int], episodes: Sequence[Episode], sample_count: int) -> GroundTruth:
    """Label each full window 1 if one episode covers at least half its span."""
    labels, ids, spans = [], [], []
    for w in range(len(times) // sample_count):
        start, end = window_span(times[w * sample_count:(w + 1) * sample_count])
        hits, label = [], 0
        for k, ep in enumerate(episodes):
            overlap = min(end, ep.end_ms) - max(start, ep.start_ms)
            if overlap > 0:
                hits.append(k)
                if 2 * overlap >= end - start:
                    label = 1
        labels.append(label)
        ids.append(tuple(hits))
        spans.append((start, end))
    return GroundTruth(tuple(labels), tuple(ids), tuple(spans))


def _imu_frame(t: int, in_episode: bool) -> tuple:
    phase = (t // IMU_PERIOD_MS) % 40
    gx = 5 * (abs(phase - 20) - 10)
    gy = 150 if in_episode else 0
    return (0, 0, 1000, gx, gy, 0)


def generate(config: SynthConfig, sample_count: int = 32) -> tuple[list[Frame], GroundTruth]:
    """Synthesize a frame stream and per-window labels for ``sample_count`` windows."""
    if sample_count < 3:
        raise ConfigError("sample_count must be >= 3", "sample_count")
    rng = SplitMix64(config.seed)
    times = sample_times(config)
    n = times.shape[0]
    episodes = sorted(config.episodes, key=lambda e: e.start_ms)

    level = np.full(n, config.baseline_adc, dtype=np.int64)
    for ep in episodes:
        level[(times >= ep.start_ms) & (times < ep.end_ms)] += ep.intensity_adc

    u = rng.floats(2 * n)
    width = 2 * config.noise_amp + 1
    noise = np.minimum(np.floor(u[0::2] * width).astype(np.int64), width - 1) - config.noise_amp
    spikes = np.where(u[1::2] < config.spike_prob, config.spike_adc, 0)
    adc = np.clip(level + noise + spikes, 0, ADC_MAX)

    # (t_ms, type order, payload) so that ties sort EMG, IMU, BTN
    events: list[tuple] = [(int(t), 0, (int(a),)) for t, a in zip(times.tolist(), adc.tolist())]
    for t in range(0, config.duration_ms, IMU_PERIOD_MS):
        inside = any(ep.start_ms <= t < ep.end_ms for ep in episodes)
        events.append((t, 1, _imu_frame(t, inside)))
    for ep in episodes:
        comply, jitter = rng.next_float(), rng.next_float()
        if comply < config.button_compliance:
            offset = min(math.floor(jitter * BUTTON_JITTER_MS), ep.end_ms - ep.start_ms - 1)
            events.append((ep.start_ms + offset, 2, (button_level(ep.intensity_adc, config.baseline_adc),)))
    events.sort(key=lambda e: (e[0], e[1]))

    kinds = (EmgFrame, ImuFrame, ButtonFrame)
    frames = [kinds[k](seq, t, *payload) for seq, (t, k, payload) in enumerate(events)]
    return frames, label_windows(times.tolist(), episodes, sample_count)
