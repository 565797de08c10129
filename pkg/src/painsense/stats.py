"""Two-sample Student t-test and one-way ANOVA.

P-values come from the regularized incomplete beta function, evaluated by
its continued fraction (modified Lentz iteration).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import ArgumentError, DegenerateDataError

_EPS = 3e-16
_TINY = 1e-300
_MAX_ITER = 100_000


@dataclass(frozen=True)
class TestResult:
    test: str
    statistic: float
    df: tuple
    p_value: float

    __test__ = False  # not a pytest class

    def line(self) -> str:
        df = "/".join(_fmt_df(d) for d in self.df)
        return f"{self.test},{self.statistic!r},{df},{self.p_value!r}"


def _fmt_df(d):
    return str(int(d)) if float(d).is_integer() else repr(d)


@dataclass(frozen=True)
class GroupSamples:
    names: tuple
    groups: tuple

    @classmethod
    def from_mapping(cls, groups: Mapping[str, Sequence[float]]):
        return cls(tuple(groups), tuple(tuple(float(v) for v in g) for g in groups.values()))

    @classmethod
    def from_csv(cls, text: str):
        """Parse ``group,value`` rows; groups keep first-appearance order."""
        rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
        if rows and [c.strip() for c in rows[0]] == ["group", "value"]:
            rows = rows[1:]
        groups: dict[str, list[float]] = {}
        for lineno, row in enumerate(rows, start=1):
            if len(row) != 2:
                raise ArgumentError(f"row {lineno}: expected 'group,value'")
            try:
                value = float(row[1])
            except ValueError:
                raise ArgumentError(f"row {lineno}: {row[1]!r} is not a number") from None
            if not math.isfinite(value):
                raise ArgumentError(f"row {lineno}: value must be finite")
            groups.setdefault(row[0].strip(), []).append(value)
        return cls.from_mapping(groups)


def _continued_fraction(a: float, b: float, x: float) -> float:
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = _TINY if abs(d) < _TINY else d
        c = 1.0 + aa / c
        c = _TINY if abs(c) < _TINY else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = _TINY if abs(d) < _TINY else d
        c = 1.0 + aa / c
        c = _TINY if abs(c) < _TINY else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """``I_x(a, b)``, the CDF of a Beta(a, b) variable at ``x``."""
    if not (a > 0 and b > 0):
        raise ArgumentError(f"shape parameters must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise ArgumentError(f"x must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return x
    log_front = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    # the continued fraction converges fast only below the distribution mean
    if x < (a + 1.0) / (a + b + 2.0):
        value = math.exp(log_front) * _continued_fraction(a, b, x) / a
    else:
        value = 1.0 - math.exp(log_front) * _continued_fraction(b, a, 1.0 - x) / b
    return min(1.0, max(0.0, value))


def _rescaled(groups: Sequence[Sequence[float]]) -> list[list[float]]:
    # power-of-two scaling is exact and keeps squares clear of underflow and overflow
    peak = max((abs(v) for g in groups for v in g), default=0.0)
    if peak == 0.0 or not math.isfinite(peak):
        return [list(map(float, g)) for g in groups]
    shift = -math.frexp(peak)[1]
    return [[math.ldexp(float(v), shift) for v in g] for g in groups]


def _mean_ss(values: Sequence[float]) -> tuple[float, float]:
    mean = math.fsum(values) / len(values)
    return mean, math.fsum((v - mean) ** 2 for v in values)


def _t_sf_two_sided(t: float, df: float) -> float:
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))


def t_test(g1: Sequence[float], g2: Sequence[float]) -> TestResult:
    """Pooled-variance two-sample t-test with a two-sided p-value."""
    n1, n2 = len(g1), len(g2)
    if n1 < 2 or n2 < 2:
        raise ArgumentError("each group needs at least 2 samples")
    g1, g2 = _rescaled([g1, g2])
    m1, ss1 = _mean_ss(g1)
    m2, ss2 = _mean_ss(g2)
    df = n1 + n2 - 2
    pooled = (ss1 + ss2) / df
    if pooled == 0.0:
        raise DegenerateDataError("pooled variance is zero")
    t = (m1 - m2) / math.sqrt(pooled * (1.0 / n1 + 1.0 / n2))
    return TestResult("ttest", t, (df,), _t_sf_two_sided(t, df))


def anova_oneway(groups: GroupSamples | Sequence[Sequence[float]]) -> TestResult:
    """One-way ANOVA F test with a right-tail p-value."""
    data = groups.groups if isinstance(groups, GroupSamples) else tuple(groups)
    k = len(data)
    if k < 2:
        raise ArgumentError("ANOVA needs at least 2 groups")
    if any(len(g) < 2 for g in data):
        raise ArgumentError("each group needs at least 2 samples")
    data = _rescaled(data)
    n = sum(len(g) for g in data)
    grand = math.fsum(v for g in data for v in g) / n
    stats = [_mean_ss(g) for g in data]
    ss_between = math.fsum(len(g) * (m - grand) ** 2 for g, (m, _) in zip(data, stats))
    ss_within = math.fsum(ss for _, ss in stats)
    if ss_within == 0.0:
        raise DegenerateDataError("within-group variance is zero")
    df1, df2 = k - 1, n - k
    f = (ss_between / df1) / (ss_within / df2)
    p = regularized_incomplete_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f))
    return TestResult("anova", f, (df1, df2), p)
