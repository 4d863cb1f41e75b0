"""Schema-driven CSV ingestion, one-hot encoding, and reproducible splits.

Conventions: y=1 is the favorable label, z=0 the unprivileged group. Cells are
whitespace-stripped strings; a cell is missing iff it is empty after stripping.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

log = logging.getLogger("fairfix.tabular")


class DataError(Exception):
    """Base for input-data problems (CLI maps these to exit code 3)."""


class MissingColumn(DataError):
    def __init__(self, name):
        super().__init__(f"column not in CSV header: {name!r}")
        self.name = name


class EmptyAfterCleaning(DataError):
    pass


class SingleClassLabel(DataError):
    pass


class SingleGroupProtected(DataError):
    pass


class DegenerateSplit(DataError):
    pass


def round_half_up(x: float) -> int:
    """round() with ties away from zero; the builtin rounds ties to even."""
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class Schema:
    label: str
    favorable: str
    protected: str
    unprivileged: str
    drop: tuple = ()
    categorical: tuple = ()

    def __post_init__(self):
        if self.label == self.protected:
            raise ValueError("label and protected columns must differ")
        if self.label in self.drop or self.protected in self.drop:
            raise ValueError("label/protected columns cannot be dropped")
        object.__setattr__(self, "favorable", str(self.favorable).strip())
        object.__setattr__(self, "unprivileged", str(self.unprivileged).strip())
        object.__setattr__(self, "drop", tuple(self.drop))
        object.__setattr__(self, "categorical", tuple(self.categorical))

    @classmethod
    def from_json(cls, path) -> "Schema":
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        try:
            return cls(
                label=obj["label"],
                favorable=obj["favorable"],
                protected=obj["protected"],
                unprivileged=obj["unprivileged"],
                drop=tuple(obj.get("drop", ())),
                categorical=tuple(obj.get("categorical", ())),
            )
        except KeyError as e:
            raise DataError(f"schema file {path} missing key {e}") from None

    def _payload(self) -> dict:
        return {
            "label": self.label,
            "favorable": self.favorable,
            "protected": self.protected,
            "unprivileged": self.unprivileged,
            "drop": list(self.drop),
            "categorical": list(self.categorical),
        }

    def to_json(self) -> str:
        return json.dumps(self._payload(), indent=2) + "\n"

    def digest(self) -> str:
        blob = json.dumps(self._payload(), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class Dataset:
    """Immutable rows + binary label/protected vectors.

    `cells` holds the retained feature columns as stripped strings, shape
    (p, f). `allow_degenerate` skips the class/group presence checks for
    prediction-only inputs (e.g. single probe rows).
    """

    feature_names: tuple
    cells: np.ndarray
    y: np.ndarray
    z: np.ndarray
    provenance: dict
    categorical_override: frozenset = frozenset()
    allow_degenerate: bool = field(default=False, repr=False)

    def __post_init__(self):
        y = np.asarray(self.y, dtype=np.int8)
        z = np.asarray(self.z, dtype=np.int8)
        cells = np.asarray(self.cells, dtype=object)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(
            self, "categorical_override", frozenset(self.categorical_override)
        )
        p = len(y)
        if p == 0:
            raise EmptyAfterCleaning("dataset has no rows")
        if cells.shape != (p, len(self.feature_names)):
            raise ValueError("cells shape does not match rows/features")
        if len(z) != p:
            raise ValueError("|y| != |z|")
        if not self.allow_degenerate:
            if len(set(y.tolist())) < 2:
                raise SingleClassLabel("need both label classes")
            if len(set(z.tolist())) < 2:
                raise SingleGroupProtected("need both protected groups")
        for a in (y, z, cells):
            a.flags.writeable = False

    def subset(self, idx: np.ndarray, note: str) -> "Dataset":
        prov = dict(self.provenance)
        prov["subset"] = note
        return Dataset(
            self.feature_names,
            self.cells[idx],
            self.y[idx],
            self.z[idx],
            prov,
            self.categorical_override,
        )

    def digest(self) -> str:
        """Content hash over rows, labels, groups, and provenance."""
        h = hashlib.sha256()
        h.update(repr(self.provenance.get("source", "")).encode())
        h.update(repr(self.feature_names).encode())
        h.update(self.y.tobytes())
        h.update(self.z.tobytes())
        for row in self.cells:
            h.update("\x1f".join(row).encode())
            h.update(b"\x1e")
        return h.hexdigest()[:16]


class DataCharacteristics(NamedTuple):
    p: int  # data points
    f: int  # retained features, before one-hot expansion


def load_csv(path, schema: Schema) -> Dataset:
    """Load an RFC-4180 CSV with header; rows with missing cells are dropped."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise EmptyAfterCleaning(f"{path} is empty") from None
        rows = [[c.strip() for c in row] for row in reader if row]

    for col in (schema.label, schema.protected, *schema.drop, *schema.categorical):
        if col not in header:
            raise MissingColumn(col)

    keep = [
        i
        for i, name in enumerate(header)
        if name not in (schema.label, schema.protected) and name not in schema.drop
    ]
    if not keep:
        raise EmptyAfterCleaning("no feature columns retained by schema")
    li = header.index(schema.label)
    zi = header.index(schema.protected)

    kept_rows, y, z = [], [], []
    dropped = 0
    needed = keep + [li, zi]
    for row in rows:
        if len(row) != len(header) or any(row[i] == "" for i in needed):
            dropped += 1
            continue
        kept_rows.append([row[i] for i in keep])
        y.append(1 if row[li] == schema.favorable else 0)
        z.append(0 if row[zi] == schema.unprivileged else 1)
    if dropped:
        log.info("dropped %d incomplete rows from %s", dropped, path)
    if not kept_rows:
        raise EmptyAfterCleaning(f"no usable rows in {path}")

    cells = np.empty((len(kept_rows), len(keep)), dtype=object)
    for i, row in enumerate(kept_rows):
        cells[i] = row
    return Dataset(
        feature_names=tuple(header[i] for i in keep),
        cells=cells,
        y=np.array(y),
        z=np.array(z),
        provenance={
            "source": str(path),
            "schema_digest": schema.digest(),
            "dropped_rows": dropped,
        },
        categorical_override=frozenset(schema.categorical),
    )


def characteristics(ds: Dataset) -> DataCharacteristics:
    return DataCharacteristics(p=len(ds.y), f=len(ds.feature_names))


def split(ds: Dataset, train_fraction: float, seed: int):
    """Random (train, val) partition; re-draws until both sides hold both
    label classes and both protected groups, up to 100 attempts."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0,1)")
    p = len(ds.y)
    n_train = round_half_up(train_fraction * p)
    if n_train < 1 or n_train >= p:
        raise DegenerateSplit(f"{p} rows cannot split at fraction {train_fraction}")
    rng = np.random.default_rng(seed)
    for _ in range(100):
        perm = rng.permutation(p)
        tr = np.sort(perm[:n_train])
        va = np.sort(perm[n_train:])
        ok = True
        for idx in (tr, va):
            if len(set(ds.y[idx].tolist())) < 2 or len(set(ds.z[idx].tolist())) < 2:
                ok = False
                break
        if ok:
            return ds.subset(tr, "train"), ds.subset(va, "val")
    raise DegenerateSplit("no valid partition in 100 draws")


def _parse_numeric(cell: str):
    """float(cell), or None when it does not parse to a finite number."""
    try:
        v = float(cell)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


@dataclass
class Encoder:
    """Column encodings fitted on the training split.

    Numeric columns pass through; categorical columns one-hot in
    first-appearance order. Unseen categories become an all-zero block and
    unparseable numeric cells become 0.0.
    """

    feature_names: tuple
    kinds: tuple  # "numeric" | "categorical" per feature
    categories: dict  # name -> tuple of values, first-appearance order

    @classmethod
    def fit(cls, ds: Dataset) -> "Encoder":
        kinds, categories = [], {}
        for j, name in enumerate(ds.feature_names):
            col = ds.cells[:, j]
            forced = name in ds.categorical_override
            if not forced and all(_parse_numeric(c) is not None for c in col):
                kinds.append("numeric")
            else:
                kinds.append("categorical")
                seen = {}
                for c in col:
                    seen.setdefault(c, None)
                categories[name] = tuple(seen)
        return cls(ds.feature_names, tuple(kinds), categories)

    @property
    def column_names(self) -> tuple:
        names = []
        for name, kind in zip(self.feature_names, self.kinds):
            if kind == "numeric":
                names.append(name)
            else:
                names.extend(f"{name}={v}" for v in self.categories[name])
        return tuple(names)

    def transform(self, ds: Dataset) -> np.ndarray:
        if ds.feature_names != self.feature_names:
            raise ValueError("dataset features do not match encoder")
        blocks = []
        for j, (name, kind) in enumerate(zip(self.feature_names, self.kinds)):
            col = ds.cells[:, j]
            if kind == "numeric":
                vals = np.array(
                    [v if (v := _parse_numeric(c)) is not None else 0.0 for c in col]
                )
                blocks.append(vals[:, None])
            else:
                cats = self.categories[name]
                index = {v: k for k, v in enumerate(cats)}
                block = np.zeros((len(col), len(cats)))
                for i, c in enumerate(col):
                    k = index.get(c)
                    if k is not None:
                        block[i, k] = 1.0
                blocks.append(block)
        return np.hstack(blocks)


@dataclass
class FeatureMatrix:
    values: np.ndarray
    column_names: tuple
    encoder: Encoder


def encode(ds: Dataset) -> FeatureMatrix:
    """Fit an Encoder on ds and materialize its matrix."""
    enc = Encoder.fit(ds)
    return FeatureMatrix(enc.transform(ds), enc.column_names, enc)
