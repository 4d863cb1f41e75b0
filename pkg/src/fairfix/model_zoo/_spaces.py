"""Algorithm/component enums, hyperparameter spaces, and config sampling."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ..tabular import round_half_up


class AlgorithmKind(enum.Enum):
    """Classifier families; values are the serialized/CLI names."""

    LOGISTIC_REGRESSION = "logreg"
    DECISION_TREE = "dtree"
    RANDOM_FOREST = "rforest"
    GRADIENT_BOOSTING = "gboost"
    KNN = "knn"


class ComponentKind(enum.Enum):
    """Preprocessing components; declaration order breaks frequency ties."""

    NONE = "none"
    STANDARDIZE = "standardize"
    MINMAX = "minmax"
    VARIANCE_TOPK = "variance_topk"
    REBALANCE = "rebalance"


_COMPONENT_ORDER = {c: i for i, c in enumerate(ComponentKind)}


def component_rank(c: ComponentKind) -> int:
    return _COMPONENT_ORDER[c]


@dataclass(frozen=True)
class ParamDef:
    """One hyperparameter: categorical, integer range, or real range.

    Declared spaces always have lo < hi; a pruned space may pin a numeric
    param to a single point (lo == hi).
    """

    name: str
    kind: str  # "cat" | "int" | "real"
    lo: float = 0.0
    hi: float = 0.0
    scale: str = "linear"  # "linear" | "log"
    values: tuple = ()

    def __post_init__(self):
        if self.kind == "cat":
            if not self.values or len(set(self.values)) != len(self.values):
                raise ValueError(f"{self.name}: categorical values must be non-empty, unique")
        elif self.kind in ("int", "real"):
            if self.lo > self.hi:
                raise ValueError(f"{self.name}: lo > hi")
            if self.scale == "log" and self.lo <= 0:
                raise ValueError(f"{self.name}: log scale requires lo > 0")
            if self.scale not in ("linear", "log"):
                raise ValueError(f"{self.name}: bad scale {self.scale}")
        else:
            raise ValueError(f"{self.name}: bad kind {self.kind}")

    def sample(self, rng: np.random.Generator):
        if self.kind == "cat":
            return self.values[int(rng.integers(len(self.values)))]
        if self.lo == self.hi:
            return int(self.lo) if self.kind == "int" else float(self.lo)
        if self.scale == "log":
            u = rng.uniform(math.log(self.lo), math.log(self.hi))
            v = math.exp(u)
        else:
            v = rng.uniform(self.lo, self.hi)
        if self.kind == "int":
            return int(min(max(round_half_up(v), int(self.lo)), int(self.hi)))
        return float(v)

    def default(self):
        if self.kind == "cat":
            return self.values[0]
        if self.scale == "log":
            v = math.sqrt(self.lo * self.hi)
        else:
            v = (self.lo + self.hi) / 2.0
        return round_half_up(v) if self.kind == "int" else float(v)

    def contains(self, v) -> bool:
        if self.kind == "cat":
            return v in self.values
        if self.kind == "int" and not isinstance(v, (int, np.integer)):
            return False
        return self.lo <= v <= self.hi


@dataclass(frozen=True)
class HyperparameterSpace:
    algorithm: AlgorithmKind
    params: tuple  # of ParamDef
    components: tuple  # of ComponentKind, in declaration order

    def __post_init__(self):
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise ValueError("duplicate param names")
        if not self.components:
            raise ValueError("space needs at least one component")
        ordered = tuple(sorted(set(self.components), key=component_rank))
        object.__setattr__(self, "components", ordered)
        object.__setattr__(self, "params", tuple(self.params))

    def param(self, name: str) -> ParamDef:
        for p in self.params:
            if p.name == name:
                return p
        raise KeyError(name)


@dataclass(frozen=True)
class PipelineConfig:
    algorithm: AlgorithmKind
    component: ComponentKind
    params: dict

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm.value,
            "component": self.component.value,
            "params": {k: self.params[k] for k in sorted(self.params)},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        algorithm = AlgorithmKind(d["algorithm"])
        space = default_space(algorithm)
        params = {}
        for name, v in d["params"].items():
            pd = space.param(name)
            if pd.kind == "int":
                params[name] = int(v)
            elif pd.kind == "real":
                params[name] = float(v)
            else:
                params[name] = str(v)
        return cls(algorithm, ComponentKind(d["component"]), params)


_ALL_COMPONENTS = tuple(ComponentKind)

_SPACES = {
    AlgorithmKind.LOGISTIC_REGRESSION: (
        ParamDef("learning_rate", "real", 1e-4, 1.0, "log"),
        ParamDef("l2", "real", 1e-6, 1.0, "log"),
        ParamDef("epochs", "int", 20, 300, "linear"),
    ),
    AlgorithmKind.DECISION_TREE: (
        ParamDef("max_depth", "int", 2, 30, "linear"),
        ParamDef("min_leaf", "int", 1, 32, "log"),
        ParamDef("criterion", "cat", values=("gini", "entropy")),
    ),
    AlgorithmKind.RANDOM_FOREST: (
        ParamDef("trees", "int", 16, 256, "log"),
        ParamDef("max_depth", "int", 2, 30, "linear"),
        ParamDef("max_features", "cat", values=("sqrt", "log2", "all")),
        ParamDef("min_leaf", "int", 1, 32, "log"),
        ParamDef("bootstrap", "cat", values=("true", "false")),
    ),
    AlgorithmKind.GRADIENT_BOOSTING: (
        ParamDef("stages", "int", 20, 300, "log"),
        ParamDef("learning_rate", "real", 0.01, 0.5, "log"),
        ParamDef("max_depth", "int", 1, 8, "linear"),
        ParamDef("subsample", "real", 0.5, 1.0, "linear"),
    ),
    AlgorithmKind.KNN: (
        ParamDef("k", "int", 1, 51, "linear"),
        ParamDef("weights", "cat", values=("uniform", "distance")),
    ),
}


def default_space(algorithm: AlgorithmKind) -> HyperparameterSpace:
    return HyperparameterSpace(algorithm, _SPACES[algorithm], _ALL_COMPONENTS)


def space_default(space: HyperparameterSpace) -> PipelineConfig:
    """Midpoint/first-value config of a space; component None when present."""
    comp = (
        ComponentKind.NONE
        if ComponentKind.NONE in space.components
        else space.components[0]
    )
    return PipelineConfig(
        space.algorithm, comp, {p.name: p.default() for p in space.params}
    )


def default_config(algorithm: AlgorithmKind) -> PipelineConfig:
    return space_default(default_space(algorithm))


def sample(space: HyperparameterSpace, rng: np.random.Generator) -> PipelineConfig:
    comp = space.components[int(rng.integers(len(space.components)))]
    return PipelineConfig(
        space.algorithm, comp, {p.name: p.sample(rng) for p in space.params}
    )
