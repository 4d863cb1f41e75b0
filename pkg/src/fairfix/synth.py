"""Synthetic biased tabular data for demos and self-checks.

Group membership shifts the first informative feature, so the true
favorable rate differs between groups by a chosen amount while the label
stays a noisy linear rule any of the bundled classifiers can learn.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from statistics import NormalDist

import numpy as np

from .tabular import Dataset, Schema


def biased_dataset(
    rows: int = 2000, disparity: float = 0.3, seed: int = 0, noise: float = 0.5
) -> Dataset:
    """Two informative features plus a protected group with a rigged gap.

    P(y=1 | group 1) - P(y=1 | group 0) = disparity in expectation; group 0
    is the unprivileged one.
    """
    if not 0.0 <= disparity < 1.0:
        raise ValueError(f"disparity must be in [0,1), got {disparity}")
    if rows < 4:
        raise ValueError("need at least 4 rows")
    rng = np.random.default_rng(seed)
    # y = 1{x1+x2+eps > 0} with x1 centered at +-a by group: the favorable
    # rate per group is Phi(+-a/s), so a = s*Phi^-1(0.5 + disparity/2)
    s = math.sqrt(2.0 + noise * noise)
    a = s * NormalDist().inv_cdf(0.5 + disparity / 2.0)
    z = rng.integers(0, 2, rows).astype(np.int8)
    x1 = rng.normal(0.0, 1.0, rows) + np.where(z == 1, a, -a)
    x2 = rng.normal(0.0, 1.0, rows)
    eps = rng.normal(0.0, noise, rows)
    y = (x1 + x2 + eps > 0).astype(np.int8)
    cells = np.empty((rows, 2), dtype=object)
    cells[:, 0] = [repr(float(v)) for v in x1]
    cells[:, 1] = [repr(float(v)) for v in x2]
    return Dataset(
        ("x1", "x2"),
        cells,
        y,
        z,
        {
            "source": "synthetic",
            "rows": rows,
            "disparity": disparity,
            "seed": seed,
            "noise": noise,
        },
    )


def fixture_schema() -> Schema:
    return Schema(
        label="outcome",
        favorable="1",
        protected="group",
        unprivileged="0",
        drop=(),
        categorical=(),
    )


def write_fixture(
    out_dir,
    rows: int = 2000,
    disparity: float = 0.3,
    seed: int = 0,
    noise: float = 0.5,
):
    """Write data.csv and schema.json for CLI runs; returns both paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ds = biased_dataset(rows, disparity, seed, noise)
    data_path = out_dir / "data.csv"
    schema_path = out_dir / "schema.json"
    with open(data_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x1", "x2", "group", "outcome"])
        for i in range(rows):
            w.writerow([ds.cells[i, 0], ds.cells[i, 1], ds.z[i], ds.y[i]])
    schema_path.write_text(fixture_schema().to_json())
    return data_path, schema_path
