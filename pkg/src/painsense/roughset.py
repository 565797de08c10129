"""Rough-set screening of analysis windows.

An :class:`InformationSystem` holds, for every object (window) and
attribute (feature), a discrete code used for indiscernibility and a
normalized real value in ``[0, 1]`` used for scoring. Attributes are
weighted by mixing their dependence degree with their significance, and
objects whose weighted score reaches a threshold are kept.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import ArgumentError, ConfigError

DEPENDENCE_MODES = ("single", "full")


class ConstantAttributeWarning(UserWarning):
    """An attribute column has zero range and normalizes to all zeros."""


@dataclass(frozen=True, eq=False)
class InformationSystem:
    """Decision table ``(U, A, V, f)``.

    ``codes[i, j]`` is the discrete value of attribute ``attributes[j]`` for
    object ``universe[i]``; ``raw`` is the matching normalized real value.
    """

    universe: tuple
    attributes: tuple
    codes: np.ndarray
    raw: np.ndarray
    constant_attributes: tuple = ()
    _index: dict = field(init=False, repr=False)
    _attr_index: dict = field(init=False, repr=False)

    def __post_init__(self):
        n, m = len(self.universe), len(self.attributes)
        codes = np.ascontiguousarray(self.codes, dtype=np.int64).reshape(n, m)
        raw = np.ascontiguousarray(self.raw, dtype=np.float64).reshape(n, m)
        if codes.size and codes.min() < 0:
            raise ArgumentError("attribute codes must be non-negative")
        if raw.size and (np.isnan(raw).any() or raw.min() < 0.0 or raw.max() > 1.0):
            raise ArgumentError("normalized values must lie in [0, 1]")
        index = {obj: i for i, obj in enumerate(self.universe)}
        if len(index) != n:
            raise ArgumentError("object ids must be unique")
        attr_index = {a: j for j, a in enumerate(self.attributes)}
        if len(attr_index) != m:
            raise ArgumentError("attribute names must be unique")
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "raw", raw)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_attr_index", attr_index)

    @classmethod
    def from_codes(cls, columns: Mapping[str, Sequence[int]], universe: Sequence | None = None, raw=None):
        """Build a table from integer code columns.

        Without ``raw`` the normalized values are the min-max normalized codes.
        """
        attributes = tuple(columns)
        n = len(next(iter(columns.values()))) if columns else 0
        universe = tuple(range(1, n + 1)) if universe is None else tuple(universe)
        codes = np.column_stack([np.asarray(columns[a], dtype=np.int64) for a in attributes]) if attributes else np.zeros((n, 0))
        constant = tuple(a for j, a in enumerate(attributes) if n and codes[:, j].min() == codes[:, j].max())
        if raw is None:
            raw = np.column_stack([_normalize(codes[:, j])[0] for j in range(codes.shape[1])]) if attributes else np.zeros((n, 0))
        return cls(universe, attributes, codes, raw, constant)

    @classmethod
    def from_values(cls, columns: Mapping[str, Sequence[float]], bins: int = 5, universe: Sequence | None = None):
        """Normalize each real-valued column to [0, 1] and discretize it into ``bins`` codes."""
        _check_bins(bins)
        attributes = tuple(columns)
        n = len(next(iter(columns.values()))) if columns else 0
        universe = tuple(range(1, n + 1)) if universe is None else tuple(universe)
        raw_cols, code_cols, constant = [], [], []
        for a in attributes:
            values = np.asarray(columns[a], dtype=np.float64)
            if values.shape[0] != n:
                raise ArgumentError(f"column {a!r} has {values.shape[0]} values, expected {n}")
            normalized, is_constant = _normalize(values) if n else (values, False)
            if is_constant:
                constant.append(a)
            raw_cols.append(normalized)
            code_cols.append(_discretize(normalized, bins))
        shape = (n, len(attributes))
        raw = np.column_stack(raw_cols) if attributes else np.zeros(shape)
        codes = np.column_stack(code_cols) if attributes else np.zeros(shape, dtype=np.int64)
        return cls(universe, attributes, codes, raw, tuple(constant))

    def __len__(self):
        return len(self.universe)

    def attribute_columns(self, attributes: Iterable[str]) -> list[int]:
        cols = []
        for a in attributes:
            try:
                cols.append(self._attr_index[a])
            except KeyError:
                raise ArgumentError(f"unknown attribute {a!r}") from None
        return cols

    def target_mask(self, target: Iterable[Hashable]) -> np.ndarray:
        mask = np.zeros(len(self.universe), dtype=bool)
        for obj in target:
            try:
                mask[self._index[obj]] = True
            except KeyError:
                raise ArgumentError(f"target member {obj!r} is not in the universe") from None
        return mask


@dataclass(frozen=True)
class TargetSet:
    members: frozenset

    @classmethod
    def from_labels(cls, system: InformationSystem, labels: Sequence[int]):
        if len(labels) != len(system.universe):
            raise ArgumentError(f"{len(labels)} labels for {len(system.universe)} objects")
        return cls(frozenset(obj for obj, lab in zip(system.universe, labels) if lab))

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class AttributeWeights:
    attributes: tuple
    rho: tuple
    gamma: tuple
    omega: tuple
    omega_norm: tuple
    alpha: float
    beta: float
    dependence_mode: str = "single"
    zero_mass: bool = False

    def rows(self):
        return list(zip(self.attributes, self.rho, self.gamma, self.omega, self.omega_norm))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["attribute", "rho", "gamma", "omega", "omega_norm"])
        for name, *vals in self.rows():
            writer.writerow([name, *(repr(float(v)) for v in vals)])
        return buf.getvalue()


@dataclass(frozen=True)
class ScreenResult:
    selected: tuple
    scores: tuple
    theta: float


def _normalize(values: np.ndarray) -> tuple[np.ndarray, bool]:
    lo, hi = values.min(), values.max()
    if hi == lo:
        return np.zeros(values.shape[0]), True
    return np.clip((values - lo) / (hi - lo), 0.0, 1.0), False


def normalize_attribute(values: Sequence[float]) -> np.ndarray:
    """Min-max normalize to ``[0, 1]``.

    A constant column maps to zeros and emits :class:`ConstantAttributeWarning`.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] == 0:
        raise ArgumentError("cannot normalize an empty attribute")
    out, constant = _normalize(arr)
    if constant:
        warnings.warn("constant attribute normalized to zeros", ConstantAttributeWarning, stacklevel=2)
    return out


def _check_bins(bins):
    if int(bins) != bins or bins < 2:
        raise ConfigError(f"bins must be an integer >= 2, got {bins}", "bins")


def _discretize(normalized: np.ndarray, bins: int) -> np.ndarray:
    return np.minimum(np.floor(normalized * bins).astype(np.int64), bins - 1)


def discretize(normalized: Sequence[float], bins: int) -> np.ndarray:
    """Equal-width bin codes ``min(floor(v * bins), bins - 1)``."""
    _check_bins(bins)
    arr = np.asarray(normalized, dtype=np.float64)
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise ArgumentError("discretize expects values in [0, 1]")
    return _discretize(arr, int(bins))


def _block_ids(system: InformationSystem, cols: list[int]) -> np.ndarray:
    return _kernels.partition_codes(system.codes[:, cols])


def _positive_mask(system: InformationSystem, cols: list[int], target: np.ndarray) -> np.ndarray:
    ids = _block_ids(system, cols)
    n_blocks = int(ids.max()) + 1 if ids.shape[0] else 0
    leaks = np.zeros(n_blocks, dtype=bool)
    leaks[ids[~target]] = True
    return ~leaks[ids]


def _attribute_subset(system, attributes) -> list[int]:
    attributes = list(attributes)
    if not attributes:
        raise ArgumentError("attribute subset must be non-empty")
    return system.attribute_columns(attributes)


def indiscernibility_classes(system: InformationSystem, attributes: Iterable[str]) -> list[tuple]:
    """Partition of the universe by equality on every attribute in ``attributes``.

    Blocks appear in order of their first member.
    """
    cols = _attribute_subset(system, attributes)
    ids = _block_ids(system, cols)
    blocks: list[list] = [[] for _ in range(int(ids.max()) + 1 if ids.shape[0] else 0)]
    for obj, b in zip(system.universe, ids.tolist()):
        blocks[b].append(obj)
    return [tuple(b) for b in blocks]


def positive_region(system: InformationSystem, attributes: Iterable[str], target: Iterable[Hashable]) -> list:
    """Lower approximation of ``target``: union of blocks contained in it."""
    cols = _attribute_subset(system, attributes)
    mask = _positive_mask(system, cols, system.target_mask(target))
    return [obj for obj, keep in zip(system.universe, mask.tolist()) if keep]


def dependence(system: InformationSystem, attributes: Iterable[str], target: Iterable[Hashable]) -> float:
    cols = _attribute_subset(system, attributes)
    if not system.universe:
        return 0.0
    return int(_positive_mask(system, cols, system.target_mask(target)).sum()) / len(system.universe)


def importance(system: InformationSystem, attributes: Iterable[str], attribute: str, target: Iterable[Hashable]) -> float:
    """Loss of positive-region size, as a fraction of ``|U|``, when ``attribute`` is dropped.

    Dropping the only attribute leaves the empty set, whose single block is
    the whole universe.
    """
    attributes = list(attributes)
    if attribute not in attributes:
        raise ArgumentError(f"attribute {attribute!r} is not in the attribute set")
    cols = _attribute_subset(system, attributes)
    if not system.universe:
        return 0.0
    mask = system.target_mask(target)
    rest = [c for a, c in zip(attributes, cols) if a != attribute]
    full = int(_positive_mask(system, cols, mask).sum())
    reduced = int(_positive_mask(system, rest, mask).sum())
    return (full - reduced) / len(system.universe)


def normalize_weights(omegas: Sequence[float]) -> tuple[np.ndarray, bool]:
    """Scale non-negative weights to sum to one.

    Returns the weights and a flag that is set when every input is zero, in
    which case the weights are uniform.
    """
    w = np.asarray(omegas, dtype=np.float64)
    if w.ndim != 1 or w.shape[0] == 0:
        raise ArgumentError("need at least one weight")
    if np.isnan(w).any() or (w < 0).any():
        raise ArgumentError("weights must be non-negative")
    total = math.fsum(w.tolist())
    if total == 0.0:
        return np.full(w.shape[0], 1.0 / w.shape[0]), True
    return w / total, False


def _check_mixing(alpha, beta):
    if alpha < 0 or beta < 0 or abs(alpha + beta - 1.0) > 1e-12:
        raise ConfigError(f"alpha and beta must be non-negative and sum to 1, got {alpha} + {beta}", "alpha")


def attribute_weights(
    system: InformationSystem,
    target: Iterable[Hashable],
    alpha: float = 0.5,
    beta: float = 0.5,
    dependence_mode: str = "single",
) -> AttributeWeights:
    """Combined weight ``alpha * rho + beta * gamma`` for every attribute.

    ``dependence_mode="single"`` measures each attribute's dependence on its
    own; ``"full"`` uses the dependence of the whole attribute set for all.
    """
    _check_mixing(alpha, beta)
    if dependence_mode not in DEPENDENCE_MODES:
        raise ConfigError(f"dependence_mode must be one of {DEPENDENCE_MODES}, got {dependence_mode!r}", "dependence_mode")
    attrs = list(system.attributes)
    if not attrs:
        raise ArgumentError("information system has no attributes")
    target = list(target)
    if dependence_mode == "full":
        rho_all = dependence(system, attrs, target)
        rho = [rho_all] * len(attrs)
    else:
        rho = [dependence(system, [a], target) for a in attrs]
    gamma = [importance(system, attrs, a, target) for a in attrs]
    omega = [alpha * r + beta * g for r, g in zip(rho, gamma)]
    omega_norm, zero_mass = normalize_weights(omega)
    return AttributeWeights(
        attributes=tuple(attrs),
        rho=tuple(rho),
        gamma=tuple(gamma),
        omega=tuple(omega),
        omega_norm=tuple(omega_norm.tolist()),
        alpha=alpha,
        beta=beta,
        dependence_mode=dependence_mode,
        zero_mass=zero_mass,
    )


def scores(system: InformationSystem, weights: AttributeWeights) -> np.ndarray:
    if tuple(weights.attributes) != tuple(system.attributes):
        raise ArgumentError("weights do not match the system's attributes")
    w = np.asarray(weights.omega_norm, dtype=np.float64)
    return np.clip(system.raw @ w, 0.0, 1.0)


def screen(system: InformationSystem, weights: AttributeWeights, theta: float = 0.5) -> ScreenResult:
    """Keep objects whose weighted normalized score is at least ``theta``."""
    if not 0.0 <= theta <= 1.0:
        raise ConfigError(f"theta must lie in [0, 1], got {theta}", "theta")
    s = scores(system, weights)
    selected = tuple(obj for obj, v in zip(system.universe, s.tolist()) if v >= theta)
    return ScreenResult(selected=selected, scores=tuple(s.tolist()), theta=theta)


def read_decision_table(text: str) -> tuple[InformationSystem, TargetSet]:
    """Parse ``object,<attr>...,label`` CSV text into a system and its target set."""
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]
    if not rows:
        raise ArgumentError("empty decision table")
    header = [h.strip() for h in rows[0]]
    if len(header) < 3 or header[0] != "object" or header[-1] != "label":
        raise ArgumentError("header must be object,<attr1>,...,<attrK>,label")
    attrs = header[1:-1]
    universe, columns, labels = [], {a: [] for a in attrs}, []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ArgumentError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        universe.append(row[0].strip())
        for a, cell in zip(attrs, row[1:-1]):
            cell = cell.strip()
            if not cell.isdigit() or not cell.isascii():
                raise ArgumentError(f"line {lineno}: code {cell!r} is not an unsigned integer")
            columns[a].append(int(cell))
        label = row[-1].strip()
        if label not in ("0", "1"):
            raise ArgumentError(f"line {lineno}: label must be 0 or 1, got {label!r}")
        labels.append(int(label))
    if not universe:
        raise ArgumentError("decision table has no objects")
    system = InformationSystem.from_codes(columns, universe)
    return system, TargetSet.from_labels(system, labels)


def write_decision_table(system: InformationSystem, target: Iterable[Hashable]) -> str:
    mask = system.target_mask(target)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["object", *system.attributes, "label"])
    for i, obj in enumerate(system.universe):
        writer.writerow([obj, *system.codes[i].tolist(), int(mask[i])])
    return buf.getvalue()
