"""End-to-end session processing.

Frames are parsed and windowed, each window is reduced to features, the
windows are weighted and screened as a rough-set decision table, each
window gets a pain level, and a hysteresis policy turns levels into
massage/heat commands.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ArgumentError, ConfigError
from .frames import ButtonFrame, EmgFrame, Frame, ImuFrame, StreamStats, parse_stream
from .roughset import (
    AttributeWeights,
    InformationSystem,
    TargetSet,
    _check_bins,
    _check_mixing,
    attribute_weights,
    screen,
    DEPENDENCE_MODES,
)
from .signal import EmgSample, SignalConfig, Window, WindowFeatures, extract_features, window_stream

HYSTERESIS_WINDOWS = 2
EMG_ATTRIBUTES = ("average_value", "mean_emg", "peak_emg")
IMU_ATTRIBUTE = "gyro_magnitude"


class PainLevel(enum.IntEnum):
    NONE = 0
    LOW = 1
    MODERATE = 2
    HIGH = 3


@dataclass(frozen=True)
class PainThresholds:
    t_low: float = 200
    t_mod: float = 400
    t_high: float = 700

    def __post_init__(self):
        if not self.t_low < self.t_mod < self.t_high:
            raise ConfigError(
                f"pain thresholds must satisfy t_low < t_mod < t_high, got {self.t_low}, {self.t_mod}, {self.t_high}",
                "t_low",
            )


@dataclass(frozen=True)
class PipelineConfig:
    signal: SignalConfig = field(default_factory=SignalConfig)
    bins: int = 5
    alpha: float = 0.5
    beta: float = 0.5
    theta: float = 0.5
    dependence_mode: str = "single"
    thresholds: PainThresholds = field(default_factory=PainThresholds)

    def __post_init__(self):
        _check_bins(self.bins)
        _check_mixing(self.alpha, self.beta)
        if not 0.0 <= self.theta <= 1.0:
            raise ConfigError(f"theta must lie in [0, 1], got {self.theta}", "theta")
        if self.dependence_mode not in DEPENDENCE_MODES:
            raise ConfigError(f"dependence_mode must be one of {DEPENDENCE_MODES}", "dependence_mode")


@dataclass(frozen=True)
class PainAssessment:
    window_id: int
    start_ms: int
    end_ms: int
    average_value: float
    score: float
    level: PainLevel
    screened: bool


@dataclass(frozen=True)
class TherapyCommand:
    t_ms: int
    massage_intensity: int
    heat_on: bool

    def line(self) -> str:
        return f"CMD,{self.t_ms},{self.massage_intensity},{int(self.heat_on)}"

    @classmethod
    def parse(cls, line: str) -> "TherapyCommand":
        tag, t_ms, intensity, heat = line.strip().split(",")
        if tag != "CMD" or heat not in ("0", "1") or intensity not in ("0", "1", "2", "3"):
            raise ValueError(f"not a therapy command: {line!r}")
        return cls(int(t_ms), int(intensity), heat == "1")


@dataclass(frozen=True)
class TherapyState:
    """Held actuation level plus the run of consecutive lower-level windows."""

    held: PainLevel = PainLevel.NONE
    lower_streak: int = 0
    streak_peak: PainLevel = PainLevel.NONE


def assess_pain(features: WindowFeatures | float, thresholds: PainThresholds = PainThresholds()) -> PainLevel:
    value = features.average_value if isinstance(features, WindowFeatures) else float(features)
    if value < thresholds.t_low:
        return PainLevel.NONE
    if value < thresholds.t_mod:
        return PainLevel.LOW
    if value < thresholds.t_high:
        return PainLevel.MODERATE
    return PainLevel.HIGH


def therapy_decide(level: PainLevel, previous: TherapyState = TherapyState(), t_ms: int = 0) -> tuple[TherapyCommand, TherapyState]:
    """Advance the actuation policy by one window.

    Intensity rises immediately with the level but only falls after
    ``HYSTERESIS_WINDOWS`` consecutive lower windows, and then only to the
    highest level seen during that run.
    """
    level = PainLevel(level)
    if level >= previous.held:
        state = TherapyState(level)
    else:
        streak = previous.lower_streak + 1
        peak = max(previous.streak_peak, level) if previous.lower_streak else level
        if streak >= HYSTERESIS_WINDOWS:
            state = TherapyState(PainLevel(peak))
        else:
            state = TherapyState(previous.held, streak, PainLevel(peak))
    command = TherapyCommand(t_ms, int(state.held), state.held >= PainLevel.MODERATE)
    return command, state


def align_button_labels(buttons: Iterable[ButtonFrame], windows: Sequence[Window]) -> list[int]:
    """1 for each window whose ``[start_ms, end_ms)`` contains a button press."""
    times = sorted(b.t_ms for b in buttons if b.level >= 1)
    labels = []
    for w in windows:
        lo = np.searchsorted(times, w.start_ms, side="left")
        hi = np.searchsorted(times, w.end_ms, side="left")
        labels.append(int(hi > lo))
    return labels


def imu_gyro_aggregate(imu: Iterable[ImuFrame], windows: Sequence[Window]) -> list[float]:
    """Per-window mean gyro magnitude; windows without IMU frames get 0."""
    imu = sorted(imu, key=lambda f: f.t_ms)
    times = [f.t_ms for f in imu]
    mags = [math.sqrt(f.gx * f.gx + f.gy * f.gy + f.gz * f.gz) for f in imu]
    out = []
    for w in windows:
        lo = int(np.searchsorted(times, w.start_ms, side="left"))
        hi = int(np.searchsorted(times, w.end_ms, side="left"))
        out.append(math.fsum(mags[lo:hi]) / (hi - lo) if hi > lo else 0.0)
    return out


def build_information_system(
    features: Sequence[WindowFeatures],
    imu: Sequence[float] | None,
    labels: Sequence[int],
    bins: int = 5,
) -> tuple[InformationSystem, TargetSet]:
    """Decision table over windows with one attribute per feature.

    Constant columns are listed in ``constant_attributes``.
    """
    if len(labels) != len(features) or (imu is not None and len(imu) != len(features)):
        raise ArgumentError("features, IMU aggregates and labels must have equal lengths")
    columns = {name: [getattr(f, name) for f in features] for name in EMG_ATTRIBUTES}
    if imu is not None:
        columns[IMU_ATTRIBUTE] = list(imu)
    system = InformationSystem.from_values(columns, bins, universe=[f.window_id for f in features])
    return system, TargetSet.from_labels(system, labels)


@dataclass
class SessionReport:
    assessments: list[PainAssessment] = field(default_factory=list)
    commands: list[TherapyCommand] = field(default_factory=list)
    weights: AttributeWeights | None = None
    stats: StreamStats = field(default_factory=StreamStats)
    samples_discarded: int = 0
    samples_dropped_out_of_order: int = 0
    constant_attributes: tuple = ()
    label_source: str = "buttons"
    detected_spans: list[tuple[int, int]] = field(default_factory=list)
    detection: dict | None = None

    def summary(self) -> dict:
        out = {
            "type": "summary",
            "windows": len(self.assessments),
            "screened": sum(a.screened for a in self.assessments),
            "frames_ok": self.stats.frames_ok,
            "frames_malformed": self.stats.frames_malformed,
            "frames_out_of_order": self.stats.frames_out_of_order,
            "samples_discarded": self.samples_discarded,
            "samples_dropped_out_of_order": self.samples_dropped_out_of_order,
            "constant_attributes": list(self.constant_attributes),
            "label_source": self.label_source,
            "detected_spans": [list(s) for s in self.detected_spans],
        }
        if self.weights is not None:
            out["zero_mass_weights"] = self.weights.zero_mass
        if self.detection is not None:
            out["detection"] = self.detection
        return out

    def to_jsonl(self) -> str:
        lines = []
        for a in self.assessments:
            lines.append(
                {
                    "type": "assessment",
                    "window_id": a.window_id,
                    "start_ms": a.start_ms,
                    "end_ms": a.end_ms,
                    "average_value": a.average_value,
                    "score": a.score,
                    "level": a.level.name,
                    "screened": a.screened,
                }
            )
        lines.append(self.summary())
        return "".join(json.dumps(obj, sort_keys=True) + "\n" for obj in lines)

    def weights_csv(self) -> str:
        if self.weights is None:
            return "attribute,rho,gamma,omega,omega_norm\n"
        return self.weights.to_csv()

    def command_lines(self) -> str:
        return "".join(c.line() + "\n" for c in self.commands)


def detected_spans(assessments: Sequence[PainAssessment]) -> list[tuple[int, int]]:
    """Merge runs of consecutive windows with a level above NONE into spans."""
    spans: list[tuple[int, int]] = []
    prev_id = None
    for a in assessments:
        if a.level == PainLevel.NONE:
            prev_id = None
            continue
        if prev_id is not None and a.window_id == prev_id + 1:
            spans[-1] = (spans[-1][0], a.end_ms)
        else:
            spans.append((a.start_ms, a.end_ms))
        prev_id = a.window_id
    return spans


def detection_summary(assessments: Sequence[PainAssessment], truth: Sequence[int]) -> dict:
    predicted = [int(a.level > PainLevel.NONE) for a in assessments]
    tp = sum(p and t for p, t in zip(predicted, truth))
    fp = sum(p and not t for p, t in zip(predicted, truth))
    fn = sum(t and not p for p, t in zip(predicted, truth))
    return {
        "true_positive": tp,
        "false_positive": fp,
        "false_negative": fn,
        "recall": tp / (tp + fn) if tp + fn else 1.0,
        "precision": tp / (tp + fp) if tp + fp else 1.0,
    }


def _emg_samples(frames: Sequence[Frame]) -> tuple[list[EmgSample], int]:
    samples, dropped, last = [], 0, None
    for f in frames:
        if isinstance(f, EmgFrame):
            if last is not None and f.seq <= last:
                dropped += 1
                continue
            samples.append(EmgSample(f.seq, f.t_ms, f.adc))
            last = f.seq
    return samples, dropped


def run_session(
    frame_source: Iterable[str | bytes | Frame],
    config: PipelineConfig = PipelineConfig(),
    truth: Sequence[int] | None = None,
) -> SessionReport:
    """Process one session.

    ``frame_source`` yields wire lines or already-parsed frames. With
    ``truth`` (one label per full window) the target set comes from the
    labels and the report carries recall/precision; otherwise button
    presses define the target set.
    """
    items = list(frame_source)
    if items and not isinstance(items[0], (str, bytes, bytearray)):
        frames, stats = items, StreamStats(frames_ok=len(items))
    else:
        frames, stats = parse_stream(items)

    samples, dropped = _emg_samples(frames)
    windows, discarded = window_stream(samples, config.signal.sample_count)
    report = SessionReport(
        stats=stats,
        samples_discarded=discarded,
        samples_dropped_out_of_order=dropped,
        label_source="truth" if truth is not None else "buttons",
    )
    if not windows:
        if truth is not None:
            report.detection = detection_summary([], [])
        return report

    features = [extract_features(w, config.signal) for w in windows]
    if truth is not None:
        if len(truth) != len(windows):
            raise ArgumentError(f"{len(truth)} ground-truth labels for {len(windows)} windows")
        labels = [int(t) for t in truth]
    else:
        labels = align_button_labels((f for f in frames if isinstance(f, ButtonFrame)), windows)
    imu_frames = [f for f in frames if isinstance(f, ImuFrame)]
    imu = imu_gyro_aggregate(imu_frames, windows) if imu_frames else None

    system, target = build_information_system(features, imu, labels, config.bins)
    weights = attribute_weights(system, target, config.alpha, config.beta, config.dependence_mode)
    result = screen(system, weights, config.theta)
    selected = set(result.selected)

    state = TherapyState()
    for w, feat, score in zip(windows, features, result.scores):
        level = assess_pain(feat, config.thresholds)
        report.assessments.append(
            PainAssessment(w.window_id, w.start_ms, w.end_ms, feat.average_value, score, level, w.window_id in selected)
        )
        command, state = therapy_decide(level, state, w.end_ms)
        report.commands.append(command)

    report.weights = weights
    report.constant_attributes = system.constant_attributes
    report.detected_spans = detected_spans(report.assessments)
    if truth is not None:
        report.detection = detection_summary(report.assessments, labels)
    return report
