"""Cost scalarization, adaptive fairness weight, and repair orchestration.

The repair objective is Cost = beta*f + (1-beta)*(1-a) for bias score f and
accuracy a. A constant majority-label predictor ("pseudo model") reaches
accuracy a0 with zero bias, so (1-beta)*(1-a0) upper-bounds what any useful
candidate must beat. Requiring the buggy model (a1, f1) to sit exactly at
that threshold yields the lower bound L = (a1-a0)/(a1-a0+f1) for beta; the
greedy weight identifier then raises beta from L while candidates keep
improving and freezes it after a patience run of misses.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, replace

from . import smbo
from .fairea import (
    DEFAULT_REPETITIONS,
    TradeoffBaseline,
    TradeoffPoint,
    TradeoffRegion,
    build_baseline,
    classify_region,
)
from .metrics import DEFAULT_DI_CAP, MetricKind, bias_value
from .model_zoo import (
    AlgorithmKind,
    FittedPipeline,
    PipelineConfig,
    default_config,
    default_space,
    predict,
    train,
)
from .tabular import Dataset, characteristics, split

EPSILON = 0.01  # keeps 1-beta positive so the pseudo-cost threshold stays live
FAIRNESS_TOLERANCE = 1e-6
DEFAULT_ALPHA = 0.05
DEFAULT_PATIENCE = 20
DEFAULT_TRAIN_FRACTION = 0.7


class AlreadyFair(Exception):
    """The unrepaired model is already below the bias tolerance."""

    def __init__(self, message, pipeline=None, accuracy=None, bias=None):
        super().__init__(message)
        self.pipeline = pipeline
        self.accuracy = accuracy
        self.bias = bias


def pseudo_accuracy(y) -> float:
    """Accuracy of always predicting the majority class."""
    n = len(y)
    ones = int((y == 1).sum())
    return max(ones, n - ones) / n


def cost(beta: float, f: float, a: float) -> float:
    if not 0.0 <= beta < 1.0:
        raise ValueError(f"beta must be in [0,1), got {beta}")
    if f < 0.0:
        raise ValueError(f"bias score must be >= 0, got {f}")
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"accuracy must be in [0,1], got {a}")
    return beta * f + (1.0 - beta) * (1.0 - a)


def pseudo_cost(beta: float, a0: float) -> float:
    """Cost of the constant majority predictor; candidates must beat this."""
    return (1.0 - beta) * (1.0 - a0)


def beta_lower_bound(a1: float, a0: float, f1: float) -> float:
    """Smallest beta at which the buggy model stops beating the pseudo model.

    At beta = L the buggy model's cost equals the pseudo cost exactly; below
    it, accuracy alone would keep the buggy model the winner.
    """
    if f1 < FAIRNESS_TOLERANCE and a1 > a0:
        raise AlreadyFair(
            f"bias {f1!r} is below tolerance and accuracy beats the pseudo model"
        )
    num = a1 - a0
    den = num + f1
    if den == 0.0:
        if num == 0.0:
            raise ValueError("lower bound undefined: f1 = 0 and a1 = a0")
        raw = 0.0  # num < 0 with f1 = -num: the ratio is negative in the limit
    else:
        raw = num / den
    return min(max(raw, 0.0), 1.0 - EPSILON)


@dataclass(frozen=True)
class BetaState:
    """Greedy weight identifier state; immutable snapshots per trial."""

    beta: float
    alpha: float
    count: int
    checker: bool
    patience: int
    L: float
    a0: float
    a1: float
    f1: float


def initial_beta_state(
    a1, a0, f1, alpha: float = DEFAULT_ALPHA, patience: int = DEFAULT_PATIENCE
) -> BetaState:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0,1), got {alpha}")
    if patience < 1:
        raise ValueError(f"patience must be >= 1, got {patience}")
    L = beta_lower_bound(a1, a0, f1)
    return BetaState(
        beta=L, alpha=alpha, count=0, checker=False, patience=patience,
        L=L, a0=a0, a1=a1, f1=f1,
    )


def greedy_update(s: BetaState, improved: bool) -> BetaState:
    """One step of the greedy weight identifier.

    Improvements push beta up by alpha; a patience run of misses steps it
    back down once and freezes it there for the rest of the search.
    """
    if improved and not s.checker:
        return replace(s, beta=min(s.beta + s.alpha, 1.0 - EPSILON), count=0)
    if not improved:
        count = s.count + 1
        if count >= s.patience and not s.checker:
            return replace(
                s, beta=max(s.beta - s.alpha, s.L), count=count, checker=True
            )
        return replace(s, count=count)
    return s


@dataclass(frozen=True)
class RepairConfig:
    metric: MetricKind
    trials: int
    seconds: float | None = None
    seed: int = 0
    alpha: float = DEFAULT_ALPHA
    patience: int = DEFAULT_PATIENCE
    train_fraction: float = DEFAULT_TRAIN_FRACTION
    repetitions: int = DEFAULT_REPETITIONS
    workers: int = 1
    di_cap: float = DEFAULT_DI_CAP

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be in (0,1)")
        if self.seconds is not None and self.seconds <= 0:
            raise ValueError("seconds must be positive when given")


@dataclass
class RepairResult:
    best_config: PipelineConfig
    pipeline: FittedPipeline
    log: smbo.TrialLog
    state: BetaState
    original: TradeoffPoint
    repaired: TradeoffPoint
    region: TradeoffRegion
    baseline: TradeoffBaseline
    input_digest: str
    metric: MetricKind

    def beta_trace(self) -> list:
        return [(r.index, r.beta) for r in self.log.records]

    def report_payload(self) -> dict:
        return {
            "input_digest": self.input_digest,
            "metric": self.metric.value,
            "a0": self.state.a0,
            "a1": self.state.a1,
            "f1": self.state.f1,
            "L": self.state.L,
            "beta_trace": [[i, b] for i, b in self.beta_trace()],
            "best_config": self.best_config.to_dict(),
            "repaired": {"acc": self.repaired.acc, "bias": self.repaired.bias},
            "original": {"acc": self.original.acc, "bias": self.original.bias},
            "region": self.region.value,
            "baseline": json.loads(self.baseline.to_json()),
        }

    def report_json(self) -> str:
        return json.dumps(self.report_payload(), indent=2) + "\n"


class _TrialObjective:
    """Picklable train-and-score closure over the fixed split."""

    def __init__(self, train_ds, val_ds, kind, seed, di_cap):
        self.train_ds = train_ds
        self.val_ds = val_ds
        self.kind = kind
        self.seed = seed
        self.di_cap = di_cap

    def __call__(self, cfg: PipelineConfig):
        fp = train(cfg, self.train_ds, seed=self.seed)
        yhat = predict(fp, self.val_ds)
        acc = float((yhat == self.val_ds.y).mean())
        bias = bias_value(self.kind, self.val_ds.y, yhat, self.val_ds.z, cap=self.di_cap)
        return acc, bias


def repair(
    ds: Dataset,
    algorithm: AlgorithmKind,
    cfg: RepairConfig,
    db=None,
) -> RepairResult:
    """Search for a fairer pipeline configuration on a 7:3 split of `ds`.

    The buggy model is the algorithm's default configuration; it runs as
    trial 0. When a database is given and an entry matches this input, the
    search uses that entry's pruned space instead of the default one.
    """
    train_ds, val_ds = split(ds, cfg.train_fraction, cfg.seed)
    buggy_cfg = default_config(algorithm)
    objective = _TrialObjective(train_ds, val_ds, cfg.metric, cfg.seed, cfg.di_cap)
    buggy = train(buggy_cfg, train_ds, seed=cfg.seed)
    a1, f1 = objective(buggy_cfg)
    a0 = pseudo_accuracy(val_ds.y)
    if f1 < FAIRNESS_TOLERANCE:
        raise AlreadyFair(
            f"default model bias {f1!r} is already below tolerance",
            pipeline=buggy, accuracy=a1, bias=f1,
        )
    state = initial_beta_state(a1, a0, f1, cfg.alpha, cfg.patience)

    space = default_space(algorithm)
    if db is not None:
        from .prune_db import match_input  # deferred: prune_db builds on repair

        entry = match_input(db, characteristics(ds), state.L, algorithm)
        if entry is not None:
            space = entry.space()

    holder = {"state": state}

    def beta_fn():
        return holder["state"].beta

    def on_trial(record):
        improved = (
            record.status == "ok"
            and record.cost < pseudo_cost(record.beta, a0)
        )
        holder["state"] = greedy_update(holder["state"], improved)

    deadline = time.monotonic() + cfg.seconds if cfg.seconds else None
    log = smbo.run(
        objective,
        space,
        cfg.trials,
        cfg.seed,
        beta_fn=beta_fn,
        on_trial=on_trial,
        initial=buggy_cfg,
        workers=cfg.workers,
        deadline=deadline,
    )
    final = holder["state"]
    best_record = smbo.best(log, final.beta)
    # refit is bitwise-identical to the logged trial: same seed, same split
    best_pipeline = train(best_record.config, train_ds, seed=cfg.seed)
    baseline = build_baseline(
        buggy,
        val_ds,
        cfg.metric,
        repetitions=cfg.repetitions,
        seed=cfg.seed,
        di_cap=cfg.di_cap,
    )
    repaired = TradeoffPoint(bias=best_record.bias, acc=best_record.accuracy)
    region = classify_region(baseline, repaired)
    return RepairResult(
        best_config=best_record.config,
        pipeline=best_pipeline,
        log=log,
        state=final,
        original=baseline.original,
        repaired=repaired,
        region=region,
        baseline=baseline,
        input_digest=ds.digest(),
        metric=cfg.metric,
    )
