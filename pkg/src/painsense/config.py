"""Flat ``key = value`` run configuration.

Example::

    # signal
    sample_count = 32
    filter_window = 3
    alpha = 0.6
    beta = 0.4
    episodes = 5000:15000:350, 25000:35000:450

Blank lines and ``#`` comments are ignored. Unknown keys, duplicate keys,
malformed values and contract violations raise :class:`ConfigFileError`
naming the file and line.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError
from .pipeline import PainThresholds, PipelineConfig
from .signal import SignalConfig
from .synth import Episode, SynthConfig

# key -> (section, parser)
KEYS = {
    "sample_count": ("signal", int),
    "filter_window": ("signal", int),
    "gain": ("signal", float),
    "bins": ("pipeline", int),
    "alpha": ("pipeline", float),
    "beta": ("pipeline", float),
    "theta": ("pipeline", float),
    "dependence_mode": ("pipeline", str),
    "t_low": ("thresholds", float),
    "t_mod": ("thresholds", float),
    "t_high": ("thresholds", float),
    "seed": ("synth", int),
    "duration_ms": ("synth", int),
    "emg_rate_hz": ("synth", int),
    "baseline_adc": ("synth", int),
    "noise_amp": ("synth", int),
    "episodes": ("synth", "episodes"),
    "spike_prob": ("synth", float),
    "spike_adc": ("synth", int),
    "button_compliance": ("synth", float),
}


class ConfigFileError(ConfigError):
    def __init__(self, source, line, message, field=None):
        where = f"{source}:{line}" if line else str(source)
        super().__init__(f"{where}: {message}", field)
        self.source = source
        self.line = line


@dataclass(frozen=True)
class RunConfig:
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)

    def with_seed(self, seed: int) -> "RunConfig":
        return replace(self, synth=replace(self.synth, seed=seed))


def _parse_episodes(text: str) -> tuple[Episode, ...]:
    text = text.strip()
    if not text:
        return ()
    episodes = []
    for item in text.split(","):
        parts = item.strip().split(":")
        if len(parts) != 3:
            raise ValueError(f"episode {item.strip()!r} must be start_ms:end_ms:intensity_adc")
        episodes.append(Episode(*(int(p) for p in parts)))
    return tuple(episodes)


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    values: dict[str, tuple[object, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigFileError(source, lineno, f"expected 'key = value', got {raw.strip()!r}")
        if key not in KEYS:
            raise ConfigFileError(source, lineno, f"unknown key {key!r}", key)
        if key in values:
            raise ConfigFileError(source, lineno, f"duplicate key {key!r}", key)
        kind = KEYS[key][1]
        try:
            parsed = _parse_episodes(value) if kind == "episodes" else kind(value)
        except ValueError as exc:
            raise ConfigFileError(source, lineno, f"bad value for {key}: {exc}", key) from None
        values[key] = (parsed, lineno)

    def section(name):
        return {k: v for k, (v, _) in values.items() if KEYS[k][0] == name}

    try:
        signal = SignalConfig(**section("signal"))
        thresholds = PainThresholds(**section("thresholds"))
        pipeline = PipelineConfig(signal=signal, thresholds=thresholds, **section("pipeline"))
        synth = SynthConfig(**section("synth"))
    except ConfigError as exc:
        line = values.get(exc.field, (None, None))[1] if exc.field else None
        raise ConfigFileError(source, line, str(exc), exc.field) from None
    return RunConfig(pipeline, synth)


def load_config(path: str | Path | None) -> RunConfig:
    """Read a config file; ``None`` gives the defaults."""
    if path is None:
        return RunConfig()
    return parse_config(Path(path).read_text(encoding="utf-8"), str(path))
