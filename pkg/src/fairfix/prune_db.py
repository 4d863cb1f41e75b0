"""Offline search-space pruning and online input matching.

Building: run the repair loop n times on a corpus input, pool the top-k
pipelines of each run, and keep the top-m components plus per-parameter
value sets / outlier-pruned numeric ranges. Matching: nearest dataset by
L1 on (points, features), then nearest beta lower bound among its
protected attributes, then an exact algorithm requirement.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .metrics import MetricKind
from .model_zoo import (
    AlgorithmKind,
    ComponentKind,
    HyperparameterSpace,
    ParamDef,
    component_rank,
    default_space,
)
from .tabular import DataCharacteristics, Dataset, characteristics

DB_VERSION = "fairfix-db/1"


class UnknownVersion(ValueError):
    """Database file carries a version tag this build cannot read."""


class MalformedEntry(ValueError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"entry {index}: {reason}")
        self.index = index


def prune_numeric(values, dev: float = 1.0):
    """[min, max] of the values within dev population-sigmas of the mean.

    When the filter removes everything (sigma 0, or everything exactly at
    the boundary) the unpruned range is returned instead.
    """
    values = list(values)
    if not values:
        raise ValueError("values must be non-empty")
    if dev <= 0:
        raise ValueError("dev must be positive")
    n = len(values)
    mean = math.fsum(values) / n
    sigma = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / n)
    survivors = [v for v in values if abs(v - mean) < dev * sigma]
    if not survivors:
        return min(values), max(values)
    return min(survivors), max(survivors)


@dataclass(frozen=True)
class DatabaseEntry:
    dataset: str
    p: int
    f: int
    protected: str
    L: float
    algorithm: AlgorithmKind
    components: tuple  # of ComponentKind, ranked by observed frequency
    params: dict  # name -> {"kind":"categorical","values":[...]} | {"kind":"numeric","lo":..,"hi":..}

    def __post_init__(self):
        if not self.components:
            raise ValueError("components must be non-empty")
        base = default_space(self.algorithm)
        declared = {p.name for p in base.params}
        for name, spec in self.params.items():
            if name not in declared:
                raise ValueError(f"unknown param {name!r} for {self.algorithm.value}")
            if spec["kind"] == "numeric" and spec["lo"] > spec["hi"]:
                raise ValueError(f"param {name!r}: lo > hi")
        object.__setattr__(self, "components", tuple(self.components))

    def space(self) -> HyperparameterSpace:
        base = default_space(self.algorithm)
        params = []
        for pd in base.params:
            spec = self.params.get(pd.name)
            if spec is None:
                params.append(pd)
            elif spec["kind"] == "categorical":
                params.append(
                    ParamDef(pd.name, "cat", values=tuple(spec["values"]))
                )
            else:
                lo, hi = spec["lo"], spec["hi"]
                if pd.kind == "int":
                    lo, hi = int(lo), int(hi)
                params.append(
                    ParamDef(pd.name, pd.kind, lo=lo, hi=hi, scale=pd.scale)
                )
        return HyperparameterSpace(self.algorithm, tuple(params), self.components)

    def payload(self) -> dict:
        base = default_space(self.algorithm)
        ordered = {
            pd.name: self.params[pd.name] for pd in base.params if pd.name in self.params
        }
        return {
            "dataset": self.dataset,
            "p": self.p,
            "f": self.f,
            "protected": self.protected,
            "L": self.L,
            "algorithm": self.algorithm.value,
            "components": [c.value for c in self.components],
            "params": ordered,
        }


@dataclass(frozen=True)
class Database:
    version: str = DB_VERSION
    provenance: dict = field(default_factory=dict)
    entries: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def to_json(self) -> str:
        payload = {
            "version": self.version,
            "provenance": self.provenance,
            "entries": [e.payload() for e in self.entries],
        }
        return json.dumps(payload, indent=2) + "\n"


def save(db: Database, path) -> None:
    Path(path).write_text(db.to_json(), encoding="utf-8")


def _entry_from_payload(i: int, obj: dict) -> DatabaseEntry:
    try:
        algorithm = AlgorithmKind(obj["algorithm"])
        components = tuple(ComponentKind(c) for c in obj["components"])
        params = {}
        base = default_space(algorithm)
        for name, spec in obj["params"].items():
            pd = base.param(name)  # raises KeyError for foreign names
            if spec["kind"] == "categorical":
                values = tuple(v for v in pd.values if v in set(spec["values"]))
                if not values:
                    raise ValueError(f"param {name!r}: no declared values survive")
                params[name] = {"kind": "categorical", "values": list(values)}
            elif spec["kind"] == "numeric":
                lo = max(spec["lo"], pd.lo)
                hi = min(spec["hi"], pd.hi)
                if lo > hi:
                    raise ValueError(f"param {name!r}: range disjoint from default")
                params[name] = {"kind": "numeric", "lo": lo, "hi": hi}
            else:
                raise ValueError(f"param {name!r}: unknown kind {spec['kind']!r}")
        return DatabaseEntry(
            dataset=obj["dataset"],
            p=int(obj["p"]),
            f=int(obj["f"]),
            protected=obj["protected"],
            L=float(obj["L"]),
            algorithm=algorithm,
            components=components,
            params=params,
        )
    except MalformedEntry:
        raise
    except (KeyError, ValueError, TypeError) as exc:
        raise MalformedEntry(i, str(exc)) from exc


def load(path) -> Database:
    """Read a database file; numeric ranges are intersected with the
    algorithm's default space so a stale file can never widen the search."""
    text = Path(path).read_text(encoding="utf-8")
    obj = json.loads(text)
    version = obj.get("version")
    if version != DB_VERSION:
        raise UnknownVersion(f"cannot read version {version!r}, need {DB_VERSION!r}")
    entries = tuple(
        _entry_from_payload(i, row) for i, row in enumerate(obj.get("entries", []))
    )
    return Database(
        version=version, provenance=obj.get("provenance", {}), entries=entries
    )


@dataclass(frozen=True)
class BuildConfig:
    runs: int = 10
    trials: int = 50
    top_k: int = 10
    top_m: int = 3
    dev: float = 1.0
    metric: MetricKind = MetricKind.SPD
    train_fraction: float = 0.7
    workers: int = 1

    def __post_init__(self):
        if min(self.runs, self.trials, self.top_k, self.top_m) < 1:
            raise ValueError("runs, trials, top_k, top_m must all be >= 1")
        if self.dev <= 0:
            raise ValueError("dev must be positive")

    def provenance(self, seed) -> dict:
        return {
            "runs": self.runs,
            "trials": self.trials,
            "top_k": self.top_k,
            "top_m": self.top_m,
            "dev": self.dev,
            "seed": seed,
        }


def build_entry(
    ds: Dataset,
    dataset_name: str,
    protected_name: str,
    algorithm: AlgorithmKind,
    bcfg: BuildConfig,
    seed: int,
) -> DatabaseEntry:
    """Aggregate runs*top_k winning pipelines into a pruned-space entry."""
    from .repair_core import RepairConfig, repair  # deferred: repair uses match_input

    run_seeds = np.random.SeedSequence(seed).generate_state(bcfg.runs)
    chosen = []
    L = None
    for run_seed in run_seeds:
        result = repair(
            ds,
            algorithm,
            RepairConfig(
                metric=bcfg.metric,
                trials=bcfg.trials,
                seed=int(run_seed),
                train_fraction=bcfg.train_fraction,
                workers=bcfg.workers,
            ),
        )
        if L is None:
            L = result.state.L
        beta = result.state.beta
        ranked = sorted(
            result.log.ok_records(),
            key=lambda r: (beta * r.bias + (1.0 - beta) * (1.0 - r.accuracy), r.index),
        )
        chosen.extend(r.config for r in ranked[: bcfg.top_k])

    freq = Counter(cfg.component for cfg in chosen)
    components = sorted(freq, key=lambda c: (-freq[c], component_rank(c)))[: bcfg.top_m]

    base = default_space(algorithm)
    params = {}
    for pd in base.params:
        observed = [cfg.params[pd.name] for cfg in chosen]
        if pd.kind == "cat":
            seen = set(observed)
            params[pd.name] = {
                "kind": "categorical",
                "values": [v for v in pd.values if v in seen],
            }
        else:
            lo, hi = prune_numeric(observed, bcfg.dev)
            params[pd.name] = {"kind": "numeric", "lo": lo, "hi": hi}

    chars = characteristics(ds)
    return DatabaseEntry(
        dataset=dataset_name,
        p=chars.p,
        f=chars.f,
        protected=protected_name,
        L=L,
        algorithm=algorithm,
        components=tuple(components),
        params=params,
    )


def match_input(
    db: Database,
    chars: DataCharacteristics,
    L: float,
    algorithm: AlgorithmKind,
):
    """Nearest dataset, then nearest lower bound, then exact algorithm.

    Absence is a legal outcome; the caller falls back to the default space.
    All ties resolve to the earliest inserted entry.
    """
    if not db.entries:
        return None

    best_dataset = None
    best_dist = None
    for e in db.entries:
        d = abs(e.p - chars.p) + abs(e.f - chars.f)
        if best_dist is None or d < best_dist:
            best_dataset, best_dist = e.dataset, d

    candidates = [e for e in db.entries if e.dataset == best_dataset]
    best_attr = None
    best_gap = None
    for e in candidates:
        gap = abs(e.L - L)
        if best_gap is None or gap < best_gap:
            best_attr, best_gap = e.protected, gap

    for e in candidates:
        if e.protected == best_attr and e.algorithm is algorithm:
            return e
    return None
