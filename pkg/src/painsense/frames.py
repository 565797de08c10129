"""Text line codec for the device's EMG, IMU and button frames.

One frame per LF-terminated ASCII line::

    EMG,<seq>,<t_ms>,<adc>
    IMU,<seq>,<t_ms>,<ax>,<ay>,<az>,<gx>,<gy>,<gz>
    BTN,<seq>,<t_ms>,<level>

``seq`` and ``t_ms`` are unsigned decimals without sign or leading zeros.
IMU axes are signed integers in milli-g and milli-degrees per second.
Button levels map green=1 (mild), yellow=2 (moderate), red=3 (severe).
"""
from __future__ import annotations

import enum
from dataclasses import astuple, dataclass
from typing import Iterable, Union

from .errors import PainsenseError

U64_MAX = 2**64 - 1
I32_MIN, I32_MAX = -(2**31), 2**31 - 1
ADC_MAX = 1023
_DIGITS = frozenset("0123456789")


class ParseErrorKind(enum.Enum):
    ENCODING = "encoding"
    BAD_TAG = "bad_tag"
    FIELD_COUNT = "field_count"
    NON_NUMERIC = "non_numeric"
    RANGE = "range"


class ParseError(PainsenseError, ValueError):
    def __init__(self, kind: ParseErrorKind, message: str):
        super().__init__(f"{kind.value}: {message}")
        self.kind = kind


def _check_header(seq, t_ms):
    if not (0 <= seq <= U64_MAX and 0 <= t_ms <= U64_MAX):
        raise ValueError("seq and t_ms must be unsigned 64-bit integers")


@dataclass(frozen=True, slots=True)
class EmgFrame:
    seq: int
    t_ms: int
    adc: int

    TAG = "EMG"

    def __post_init__(self):
        _check_header(self.seq, self.t_ms)
        if not 0 <= self.adc <= ADC_MAX:
            raise ValueError(f"adc {self.adc} outside 0..{ADC_MAX}")


@dataclass(frozen=True, slots=True)
class ImuFrame:
    seq: int
    t_ms: int
    ax: int
    ay: int
    az: int
    gx: int
    gy: int
    gz: int

    TAG = "IMU"

    def __post_init__(self):
        _check_header(self.seq, self.t_ms)
        for v in (self.ax, self.ay, self.az, self.gx, self.gy, self.gz):
            if not I32_MIN <= v <= I32_MAX:
                raise ValueError(f"IMU axis value {v} outside 32-bit range")


@dataclass(frozen=True, slots=True)
class ButtonFrame:
    seq: int
    t_ms: int
    level: int

    TAG = "BTN"

    def __post_init__(self):
        _check_header(self.seq, self.t_ms)
        if self.level not in (1, 2, 3):
            raise ValueError(f"button level {self.level} not in 1..3")


Frame = Union[EmgFrame, ImuFrame, ButtonFrame]

_LAYOUT = {
    "EMG": (EmgFrame, 4),
    "IMU": (ImuFrame, 9),
    "BTN": (ButtonFrame, 4),
}


@dataclass
class StreamStats:
    frames_ok: int = 0
    frames_malformed: int = 0
    frames_out_of_order: int = 0


def _unsigned(text: str) -> int:
    if not text or not set(text) <= _DIGITS or (len(text) > 1 and text[0] == "0"):
        raise ParseError(ParseErrorKind.NON_NUMERIC, f"{text!r} is not an unsigned decimal")
    return int(text)


def _signed(text: str) -> int:
    body = text[1:] if text.startswith("-") else text
    if body == "0" and text != "0":
        raise ParseError(ParseErrorKind.NON_NUMERIC, "negative zero is not canonical")
    return -_unsigned(body) if text.startswith("-") else _unsigned(body)


def parse_line(line: str | bytes) -> Frame:
    """Decode one line (without terminator) or raise :class:`ParseError`."""
    if isinstance(line, (bytes, bytearray)):
        try:
            line = bytes(line).decode("ascii")
        except UnicodeDecodeError:
            raise ParseError(ParseErrorKind.ENCODING, "line is not ASCII") from None
    elif not line.isascii():
        raise ParseError(ParseErrorKind.ENCODING, "line is not ASCII")
    parts = line.split(",")
    layout = _LAYOUT.get(parts[0])
    if layout is None:
        raise ParseError(ParseErrorKind.BAD_TAG, f"unknown tag {parts[0][:16]!r}")
    cls, n_fields = layout
    if len(parts) != n_fields:
        raise ParseError(ParseErrorKind.FIELD_COUNT, f"{parts[0]} needs {n_fields} fields, got {len(parts)}")
    seq, t_ms = _unsigned(parts[1]), _unsigned(parts[2])
    body = [_signed(p) for p in parts[3:]] if cls is ImuFrame else [_unsigned(parts[3])]
    try:
        return cls(seq, t_ms, *body)
    except ValueError as exc:
        raise ParseError(ParseErrorKind.RANGE, str(exc)) from None


def serialize_frame(frame: Frame) -> str:
    return ",".join([frame.TAG, *(str(v) for v in astuple(frame))])


def parse_stream(lines: Iterable[str | bytes], stats: StreamStats | None = None) -> tuple[list[Frame], StreamStats]:
    """Parse lines in order, skipping and counting malformed ones.

    A frame whose ``seq`` does not exceed the previous ``seq`` of the same
    frame type is kept but counted as out of order.
    """
    stats = StreamStats() if stats is None else stats
    frames: list[Frame] = []
    last_seq: dict[type, int] = {}
    for line in lines:
        if isinstance(line, str):
            line = line.rstrip("\n")
        elif isinstance(line, (bytes, bytearray)):
            line = bytes(line).rstrip(b"\n")
        try:
            frame = parse_line(line)
        except ParseError:
            stats.frames_malformed += 1
            continue
        kind = type(frame)
        if kind in last_seq and frame.seq <= last_seq[kind]:
            stats.frames_out_of_order += 1
        last_seq[kind] = frame.seq
        stats.frames_ok += 1
        frames.append(frame)
    return frames, stats


def format_stream(frames: Iterable[Frame]) -> str:
    return "".join(serialize_frame(f) + "\n" for f in frames)
