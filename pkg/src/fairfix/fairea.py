"""Mutation baseline and trade-off region classification.

A repaired model is only worth shipping if it beats the cheapest possible
mitigation: randomly overwriting a share of the predictions with the majority
label. Sweeping that share from 10% to 100% traces a bias/accuracy curve; a
candidate model is judged by where it lands relative to the original point
and that curve.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .metrics import DEFAULT_DI_CAP, MetricKind, bias_value
from .model_zoo import FittedPipeline, predict
from .tabular import Dataset, round_half_up

DEFAULT_DEGREES = tuple(d / 10 for d in range(1, 11))
DEFAULT_REPETITIONS = 50


class TradeoffRegion(Enum):
    LOSE = "lose"
    BAD = "bad"
    INVERTED = "inverted"
    GOOD = "good"
    WIN = "win"


@dataclass(frozen=True)
class TradeoffPoint:
    """A (bias, accuracy) position; bias >= 0, acc in [0, 1]."""

    bias: float
    acc: float


@dataclass(frozen=True)
class TradeoffBaseline:
    metric: MetricKind
    original: TradeoffPoint
    a0: float
    points: tuple[tuple[float, TradeoffPoint], ...]
    repetitions: int
    replacement: int | None
    seed: int

    def to_json(self) -> str:
        payload = {
            "metric": self.metric.value,
            "original": {"bias": self.original.bias, "acc": self.original.acc},
            "a0": self.a0,
            "points": [
                {"degree": degree, "bias": pt.bias, "acc": pt.acc}
                for degree, pt in self.points
            ],
            "repetitions": self.repetitions,
            "seed": self.seed,
        }
        return json.dumps(payload, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "TradeoffBaseline":
        payload = json.loads(text)
        return cls(
            metric=MetricKind(payload["metric"]),
            original=TradeoffPoint(
                payload["original"]["bias"], payload["original"]["acc"]
            ),
            a0=payload["a0"],
            points=tuple(
                (row["degree"], TradeoffPoint(row["bias"], row["acc"]))
                for row in payload["points"]
            ),
            repetitions=payload["repetitions"],
            replacement=None,  # not part of the file format
            seed=payload["seed"],
        )


def mutate_predictions(yhat, degree, replacement, rng) -> np.ndarray:
    """Set round(degree*n) uniformly chosen positions to `replacement`."""
    if not 0.0 <= degree <= 1.0:
        raise ValueError(f"mutation degree must be in [0, 1], got {degree}")
    out = np.asarray(yhat).copy()
    n = out.shape[0]
    count = round_half_up(degree * n)
    if count:
        pos = rng.choice(n, size=count, replace=False)
        out[pos] = replacement
    return out


def build_baseline(
    fp: FittedPipeline,
    val: Dataset,
    kind: MetricKind,
    degrees=DEFAULT_DEGREES,
    repetitions: int = DEFAULT_REPETITIONS,
    seed: int = 0,
    di_cap: float = DEFAULT_DI_CAP,
) -> TradeoffBaseline:
    degrees = tuple(float(d) for d in degrees)
    if not degrees or any(b <= a for a, b in zip(degrees, degrees[1:])):
        raise ValueError("degrees must be strictly increasing")
    if degrees[-1] != 1.0:
        raise ValueError("degrees must include 1.0")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")

    yhat = predict(fp, val)
    y = val.y
    n = y.shape[0]
    acc_o = float((yhat == y).mean())
    bias_o = bias_value(kind, y, yhat, val.z, cap=di_cap)
    ones = int((y == 1).sum())
    a0 = max(ones, n - ones) / n

    rng = np.random.default_rng(seed)
    points = []
    for degree in degrees:
        if degree == 1.0:
            # full mutation is the constant majority predictor: computed, not
            # sampled, so the endpoint is exact
            points.append((degree, TradeoffPoint(0.0, a0)))
            continue
        accs = []
        biases = []
        for _ in range(repetitions):
            mutated = mutate_predictions(yhat, degree, fp.train_majority, rng)
            accs.append(float((mutated == y).mean()))
            biases.append(bias_value(kind, y, mutated, val.z, cap=di_cap))
        points.append(
            (
                degree,
                TradeoffPoint(
                    math.fsum(biases) / repetitions, math.fsum(accs) / repetitions
                ),
            )
        )
    return TradeoffBaseline(
        metric=kind,
        original=TradeoffPoint(bias_o, acc_o),
        a0=a0,
        points=tuple(points),
        repetitions=repetitions,
        replacement=fp.train_majority,
        seed=seed,
    )


def _polyline_accuracy(baseline: TradeoffBaseline, bias: float) -> float:
    """Baseline accuracy interpolated at `bias` along original->degree points.

    Queries outside the vertex bias range clamp to the nearest end; where
    several segments span the query the highest accuracy wins, so a candidate
    is never credited against a weaker stretch of the curve.
    """
    verts = [(baseline.original.bias, baseline.original.acc)]
    verts.extend((pt.bias, pt.acc) for _, pt in baseline.points)
    xs = [v[0] for v in verts]
    x = min(max(bias, min(xs)), max(xs))
    best = None
    for (x1, y1), (x2, y2) in zip(verts, verts[1:]):
        if not (min(x1, x2) <= x <= max(x1, x2)):
            continue
        if x1 == x2:
            y = max(y1, y2)
        else:
            y = y1 + (x - x1) / (x2 - x1) * (y2 - y1)
        best = y if best is None else max(best, y)
    return best


def classify_region(
    baseline: TradeoffBaseline, candidate: TradeoffPoint
) -> TradeoffRegion:
    """Place a candidate in one of the five trade-off regions.

    Ties never count as improvement, so a candidate matching the original
    point exactly classifies as Bad rather than Win.
    """
    orig = baseline.original
    acc_up = candidate.acc > orig.acc
    if acc_up and candidate.bias < orig.bias:
        return TradeoffRegion.WIN
    if acc_up:
        return TradeoffRegion.INVERTED
    if candidate.bias > orig.bias:
        return TradeoffRegion.LOSE
    reference = _polyline_accuracy(baseline, candidate.bias)
    if candidate.acc > reference:
        return TradeoffRegion.GOOD
    return TradeoffRegion.BAD
