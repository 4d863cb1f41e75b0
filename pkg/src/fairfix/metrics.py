"""Accuracy and group-fairness metrics with the >=0 bias-score normalization.

Group orientation: z=0 is the unprivileged group, z=1 the privileged group.
All raw metrics are computed from joint (z, y, yhat) counts; bias scores fold
raw values into a single "distance from fair" number with 0 meaning fair.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

DEFAULT_DI_CAP = 5.0


class MetricKind(enum.Enum):
    """The four group metrics; values are the serialized names."""

    DI = "di"
    SPD = "spd"
    EOD = "eod"
    AOD = "aod"


class RateSentinel(enum.Enum):
    """Non-numeric outcomes of the disparate-impact ratio."""

    INFINITE_DI = "infinite_di"  # rate(z=1)=0 while rate(z=0)>0
    BOTH_RATES_ZERO = "both_rates_zero"  # nobody selected in either group


class LengthMismatch(ValueError):
    pass


class UndefinedRate(ValueError):
    """A TPR/FPR conditioning set is empty (EOD/AOD only)."""


class NonPositiveDI(ValueError):
    """log of a non-positive ratio; only the two sentinels bypass this."""


@dataclass(frozen=True)
class BiasScore:
    value: float
    kind: MetricKind


@dataclass(frozen=True)
class GroupCounts:
    """Joint occurrence counts indexed cells[z, y, yhat]."""

    cells: np.ndarray

    def __post_init__(self):
        if self.cells.shape != (2, 2, 2):
            raise ValueError("cells must be (2,2,2)")
        if self.cells.min() < 0:
            raise ValueError("negative count")
        for g in (0, 1):
            if self.group_total(g) == 0:
                raise ValueError(f"group z={g} is empty")
        self.cells.flags.writeable = False

    @property
    def total(self) -> int:
        return int(self.cells.sum())

    def group_total(self, z: int) -> int:
        return int(self.cells[z].sum())

    def rate(self, z: int) -> float:
        """Pr[yhat=1 | z]."""
        return int(self.cells[z, :, 1].sum()) / self.group_total(z)

    def tpr(self, z: int) -> float:
        pos = int(self.cells[z, 1, :].sum())
        if pos == 0:
            raise UndefinedRate(f"no positive labels in group z={z}")
        return int(self.cells[z, 1, 1]) / pos

    def fpr(self, z: int) -> float:
        neg = int(self.cells[z, 0, :].sum())
        if neg == 0:
            raise UndefinedRate(f"no negative labels in group z={z}")
        return int(self.cells[z, 0, 1]) / neg


def _as_binary(v, name: str) -> np.ndarray:
    a = np.asarray(v, dtype=np.int64)
    if a.ndim != 1:
        raise ValueError(f"{name} must be 1-d")
    if a.size and not np.isin(a, (0, 1)).all():
        raise ValueError(f"{name} must be binary")
    return a


def accuracy(y, yhat) -> float:
    y = _as_binary(y, "y")
    yhat = _as_binary(yhat, "yhat")
    if len(y) != len(yhat) or len(y) == 0:
        raise LengthMismatch(f"|y|={len(y)} vs |yhat|={len(yhat)}")
    return int((y == yhat).sum()) / len(y)


def group_counts(y, yhat, z) -> GroupCounts:
    y = _as_binary(y, "y")
    yhat = _as_binary(yhat, "yhat")
    z = _as_binary(z, "z")
    if not (len(y) == len(yhat) == len(z)) or len(y) == 0:
        raise LengthMismatch("y, yhat, z must share a positive length")
    cells = np.zeros((2, 2, 2), dtype=np.int64)
    np.add.at(cells, (z, y, yhat), 1)
    return GroupCounts(cells)


def raw_metric(kind: MetricKind, c: GroupCounts):
    """Raw metric value; DI may return a RateSentinel instead of a float."""
    if kind is MetricKind.DI:
        r0, r1 = c.rate(0), c.rate(1)
        if r1 == 0.0:
            return RateSentinel.INFINITE_DI if r0 > 0.0 else RateSentinel.BOTH_RATES_ZERO
        return r0 / r1
    if kind is MetricKind.SPD:
        return c.rate(0) - c.rate(1)
    if kind is MetricKind.EOD:
        return c.tpr(0) - c.tpr(1)
    if kind is MetricKind.AOD:
        return 0.5 * (abs(c.fpr(0) - c.fpr(1)) + abs(c.tpr(0) - c.tpr(1)))
    raise ValueError(f"unknown metric kind {kind!r}")


def bias_score(kind: MetricKind, raw, cap: float = DEFAULT_DI_CAP) -> BiasScore:
    """Fold a raw metric value into a >=0 score (0 = perfectly fair)."""
    if raw is RateSentinel.BOTH_RATES_ZERO:
        return BiasScore(0.0, kind)
    if raw is RateSentinel.INFINITE_DI:
        return BiasScore(float(cap), kind)
    if kind is MetricKind.DI:
        if raw <= 0.0:
            raise NonPositiveDI(f"cannot take log of DI ratio {raw!r}")
        return BiasScore(abs(math.log(raw)), kind)
    if kind in (MetricKind.SPD, MetricKind.EOD):
        return BiasScore(abs(raw), kind)
    return BiasScore(float(raw), kind)  # AOD is >=0 by construction


def bias_value(kind: MetricKind, y, yhat, z, cap: float = DEFAULT_DI_CAP) -> float:
    """Convenience chain: counts -> raw metric -> bias score value."""
    return bias_score(kind, raw_metric(kind, group_counts(y, yhat, z)), cap).value
