"""Sequential model-based optimization over mixed pipeline spaces.

SMAC-style loop: the default configuration first, a short random design,
then an ensemble of regression trees scoring random candidates by expected
improvement. Trial evaluation may fan out to a process pool; proposals and
log appends stay serialized so a fixed seed and worker count reproduce the
same log.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .metrics import NonPositiveDI, UndefinedRate
from .model_zoo import (
    HyperparameterSpace,
    NumericOverflow,
    PipelineConfig,
    sample,
    space_default,
)
from .model_zoo._trees import RegressionTree
from .tabular import round_half_up

INIT_TRIALS = 10
MIN_SURROGATE_TRIALS = 5
EXPLORATION = 0.1
ENSEMBLE_SIZE = 10
CANDIDATES = 500

# trial-level failures; anything else is a bug and propagates
FAILED_TRIAL_CAUSES = (NumericOverflow, UndefinedRate, NonPositiveDI)


class BudgetExhaustedNoTrials(ValueError):
    """The trial budget does not allow even one evaluation."""


class NoSuccessfulTrial(RuntimeError):
    """Every logged trial failed; there is nothing to return."""


@dataclass(frozen=True)
class TrialRecord:
    index: int
    config: PipelineConfig
    accuracy: float | None
    bias: float | None
    cost: float | None
    beta: float
    wall_time: float
    status: str  # "ok" | "failed"
    proposal: str  # "default" | "init" | "surrogate" | "random"
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "config": self.config.to_dict(),
            "accuracy": self.accuracy,
            "bias": self.bias,
            "cost": self.cost,
            "beta": self.beta,
            "wall_time": self.wall_time,
            "status": self.status,
            "proposal": self.proposal,
            "error": self.error,
        }


@dataclass
class TrialLog:
    """Append-only trial history with a seed fingerprint."""

    rng_digest: str
    records: list = field(default_factory=list)

    def append(self, record: TrialRecord) -> None:
        if record.index != len(self.records):
            raise ValueError(
                f"record index {record.index} out of order, expected {len(self.records)}"
            )
        self.records.append(record)

    def ok_records(self) -> list:
        return [r for r in self.records if r.status == "ok"]

    def to_ndjson(self) -> str:
        return "".join(json.dumps(r.to_dict()) + "\n" for r in self.records)

    def digest(self) -> str:
        """64-bit hex digest over everything except wall times."""
        rows = []
        for r in self.records:
            d = r.to_dict()
            del d["wall_time"]
            rows.append(json.dumps(d, sort_keys=True, separators=(",", ":")))
        h = hashlib.sha256("\n".join(rows).encode("utf-8"))
        return h.hexdigest()[:16]


def _seed_digest(seed) -> str:
    return hashlib.sha256(repr(seed).encode("utf-8")).hexdigest()[:16]


# ---------------------------------------------------------------------------
# config <-> vector encoding for the surrogate


def encode_config(cfg: PipelineConfig, space: HyperparameterSpace) -> list:
    """Component index, then each param normalized to [0,1] or a value index."""
    vec = [float(space.components.index(cfg.component))]
    for p in space.params:
        v = cfg.params[p.name]
        if p.kind == "cat":
            vec.append(float(p.values.index(v)))
        elif p.lo == p.hi:
            vec.append(0.0)
        elif p.scale == "log":
            vec.append(
                (math.log(v) - math.log(p.lo)) / (math.log(p.hi) - math.log(p.lo))
            )
        else:
            vec.append((v - p.lo) / (p.hi - p.lo))
    return vec


def _encodable(cfg: PipelineConfig, space: HyperparameterSpace) -> bool:
    if cfg.component not in space.components:
        return False
    for p in space.params:
        if p.kind == "cat" and cfg.params[p.name] not in p.values:
            return False
    return True


def decode_config(vec, space: HyperparameterSpace) -> PipelineConfig:
    comp_i = min(max(round_half_up(vec[0]), 0), len(space.components) - 1)
    component = space.components[comp_i]
    params = {}
    for x, p in zip(vec[1:], space.params):
        if p.kind == "cat":
            i = min(max(round_half_up(x), 0), len(p.values) - 1)
            params[p.name] = p.values[i]
            continue
        if p.lo == p.hi:
            params[p.name] = int(p.lo) if p.kind == "int" else float(p.lo)
            continue
        if p.scale == "log":
            v = math.exp(math.log(p.lo) + x * (math.log(p.hi) - math.log(p.lo)))
        else:
            v = p.lo + x * (p.hi - p.lo)
        if p.kind == "int":
            params[p.name] = int(min(max(round_half_up(v), int(p.lo)), int(p.hi)))
        else:
            params[p.name] = float(min(max(v, p.lo), p.hi))
    return PipelineConfig(space.algorithm, component, params)


# ---------------------------------------------------------------------------
# acquisition


def _expected_improvement(incumbent: float, mu, sigma):
    out = np.empty_like(mu)
    for i in range(len(mu)):
        d = incumbent - mu[i]
        s = sigma[i]
        if s <= 0.0:
            out[i] = max(d, 0.0)
            continue
        u = d / s
        cdf = 0.5 * (1.0 + math.erf(u / math.sqrt(2.0)))
        pdf = math.exp(-0.5 * u * u) / math.sqrt(2.0 * math.pi)
        out[i] = d * cdf + s * pdf
    return out


def _suggest_tagged(log: TrialLog, space, rng):
    # records from outside the space (a pruned space may not contain the
    # initial configuration) cannot be encoded, so the surrogate skips them
    ok = [r for r in log.ok_records() if _encodable(r.config, space)]
    if len(ok) < MIN_SURROGATE_TRIALS:
        return sample(space, rng), "random"
    if rng.uniform() < EXPLORATION:
        return sample(space, rng), "random"
    X = np.array([encode_config(r.config, space) for r in ok])
    y = np.array([r.cost for r in ok])
    incumbent = float(y.min())
    n = len(ok)
    trees = []
    for _ in range(ENSEMBLE_SIZE):
        idx = rng.integers(0, n, n)
        tree = RegressionTree(max_depth=8, min_leaf=1)
        tree.fit(X[idx], y[idx])
        trees.append(tree)
    cands = [sample(space, rng) for _ in range(CANDIDATES)]
    C = np.array([encode_config(c, space) for c in cands])
    preds = np.array([t.predict(C) for t in trees])
    ei = _expected_improvement(incumbent, preds.mean(axis=0), preds.std(axis=0))
    return cands[int(np.argmax(ei))], "surrogate"


def suggest(log: TrialLog, space: HyperparameterSpace, rng) -> PipelineConfig:
    """Next configuration to try; random until the surrogate has data."""
    cfg, _ = _suggest_tagged(log, space, rng)
    return cfg


# ---------------------------------------------------------------------------
# the loop


def _call_objective(args):
    objective, cfg = args
    start = time.perf_counter()
    try:
        acc, bias = objective(cfg)
        return "ok", float(acc), float(bias), None, time.perf_counter() - start
    except FAILED_TRIAL_CAUSES as exc:
        err = f"{type(exc).__name__}: {exc}"
        return "failed", None, None, err, time.perf_counter() - start


def _record_outcome(outcome, cfg, tag, index, beta_fn, log, on_trial):
    status, acc, bias, err, elapsed = outcome
    beta = float(beta_fn())
    cost = beta * bias + (1.0 - beta) * (1.0 - acc) if status == "ok" else None
    record = TrialRecord(
        index=index,
        config=cfg,
        accuracy=acc,
        bias=bias,
        cost=cost,
        beta=beta,
        wall_time=elapsed,
        status=status,
        proposal=tag,
        error=err,
    )
    log.append(record)
    if on_trial is not None:
        on_trial(record)
    return record


def run(
    objective,
    space: HyperparameterSpace,
    budget: int,
    seed,
    beta_fn=None,
    on_trial=None,
    initial: PipelineConfig | None = None,
    workers: int = 1,
    deadline: float | None = None,
) -> TrialLog:
    """Evaluate up to `budget` configurations and return the trial log.

    objective: config -> (accuracy, bias score); raising one of
    FAILED_TRIAL_CAUSES records a failed trial instead of aborting the run.
    beta_fn supplies the weight each trial's cost is recorded at; on_trial
    fires once per completed trial, in index order. A deadline (absolute
    time.monotonic value) stops the loop early, after at least one trial.
    """
    if budget < 1:
        raise BudgetExhaustedNoTrials(f"budget must be >= 1, got {budget}")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if beta_fn is None:
        beta_fn = lambda: 0.0  # noqa: E731
    rng = np.random.default_rng(seed)
    log = TrialLog(rng_digest=_seed_digest(seed))

    def propose(index):
        if index == 0:
            cfg = initial if initial is not None else space_default(space)
            return cfg, "default"
        if index <= INIT_TRIALS:
            return sample(space, rng), "init"
        return _suggest_tagged(log, space, rng)

    def out_of_time(done):
        return done > 0 and deadline is not None and time.monotonic() >= deadline

    if workers == 1:
        for i in range(budget):
            if out_of_time(i):
                break
            cfg, tag = propose(i)
            outcome = _call_objective((objective, cfg))
            _record_outcome(outcome, cfg, tag, i, beta_fn, log, on_trial)
        return log

    # batched mode: proposals come from the log as frozen at the batch start,
    # results are appended in index order at the batch barrier
    with ProcessPoolExecutor(max_workers=workers) as pool:
        done = 0
        while done < budget and not out_of_time(done):
            width = min(workers, budget - done)
            proposals = [propose(done + j) for j in range(width)]
            outcomes = list(
                pool.map(_call_objective, [(objective, cfg) for cfg, _ in proposals])
            )
            for j, ((cfg, tag), outcome) in enumerate(zip(proposals, outcomes)):
                _record_outcome(outcome, cfg, tag, done + j, beta_fn, log, on_trial)
            done += width
    return log


def best(log: TrialLog, beta: float) -> TrialRecord:
    """The ok trial minimizing cost at `beta`; earliest index wins ties."""
    winner = None
    winner_cost = None
    for r in log.ok_records():
        c = beta * r.bias + (1.0 - beta) * (1.0 - r.accuracy)
        if winner_cost is None or c < winner_cost:
            winner, winner_cost = r, c
    if winner is None:
        raise NoSuccessfulTrial("every trial failed, nothing to return")
    return winner
