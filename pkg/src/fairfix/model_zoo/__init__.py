"""Native classifiers with declared hyperparameter spaces plus preprocessing
components; together they form the pipeline search space."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..tabular import Dataset, Encoder
from ._boosting import GradientBoostingModel
from ._components import FittedComponent, fit_component, top_k_count
from ._linear import LogisticModel, NumericOverflow
from ._neighbors import KNNModel
from ._spaces import (
    AlgorithmKind,
    ComponentKind,
    HyperparameterSpace,
    ParamDef,
    PipelineConfig,
    component_rank,
    default_config,
    default_space,
    sample,
    space_default,
)
from ._trees import ClassificationTree, RandomForestModel, RegressionTree

__all__ = [
    "AlgorithmKind",
    "ComponentKind",
    "HyperparameterSpace",
    "ParamDef",
    "PipelineConfig",
    "FittedPipeline",
    "NumericOverflow",
    "ClassificationTree",
    "RegressionTree",
    "component_rank",
    "default_config",
    "default_space",
    "space_default",
    "sample",
    "train",
    "predict",
    "top_k_count",
]


@dataclass
class FittedPipeline:
    """Frozen result of train(): encoder + component + classifier + metadata."""

    config: PipelineConfig
    encoder: Encoder
    component: FittedComponent
    model: object
    seed: int
    train_majority: int  # majority true label of the training split, ties to 1


def _build_model(cfg: PipelineConfig, rng: np.random.Generator, X, y):
    p = cfg.params
    a = cfg.algorithm
    if a is AlgorithmKind.LOGISTIC_REGRESSION:
        return LogisticModel(p["learning_rate"], p["l2"], p["epochs"]).fit(X, y)
    if a is AlgorithmKind.DECISION_TREE:
        return ClassificationTree(p["max_depth"], p["min_leaf"], p["criterion"]).fit(X, y)
    if a is AlgorithmKind.RANDOM_FOREST:
        return RandomForestModel(
            p["trees"],
            p["max_depth"],
            p["max_features"],
            p["min_leaf"],
            p["bootstrap"] == "true",
        ).fit(X, y, rng)
    if a is AlgorithmKind.GRADIENT_BOOSTING:
        return GradientBoostingModel(
            p["stages"], p["learning_rate"], p["max_depth"], p["subsample"]
        ).fit(X, y, rng)
    if a is AlgorithmKind.KNN:
        return KNNModel(p["k"], p["weights"]).fit(X, y)
    raise ValueError(f"unknown algorithm {a!r}")


def train(cfg: PipelineConfig, train_ds: Dataset, seed: int) -> FittedPipeline:
    """Fit encoder, component, and classifier on the training split only."""
    rng = np.random.default_rng(seed)
    encoder = Encoder.fit(train_ds)
    X = encoder.transform(train_ds)
    if X.shape[1] == 0:
        raise ValueError("encoded feature width is 0")
    y = train_ds.y.astype(np.int64)
    component, Xt, yt = fit_component(
        cfg.component, X, y, f_pre=len(train_ds.feature_names)
    )
    model = _build_model(cfg, rng, Xt, yt)
    majority = 1 if int((y == 1).sum()) >= int((y == 0).sum()) else 0
    return FittedPipeline(cfg, encoder, component, model, seed, majority)


def predict(fp: FittedPipeline, ds: Dataset) -> np.ndarray:
    X = fp.component.apply(fp.encoder.transform(ds))
    return np.asarray(fp.model.predict(X), dtype=np.int8)
