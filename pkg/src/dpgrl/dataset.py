"""Tabular ingestion: load binary CSVs, binarize mixed-type tables, split
train/test and mine the candidate antecedents."""

import warnings
from dataclasses import dataclass

import numpy as np
import pandas as pd


class DataError(ValueError):
    pass


class EmptyRuleSetError(DataError):
    """Mining produced no antecedent; the learner cannot run."""


@dataclass(frozen=True)
class Literal:
    feature_index: int
    negated: bool = False

    def name(self, feature_names):
        base = feature_names[self.feature_index]
        return f"not {base}" if self.negated else base


@dataclass(frozen=True)
class BinaryDataset:
    features: np.ndarray  # bool, shape (n, m)
    labels: np.ndarray  # bool, shape (n,)
    feature_names: tuple = ()

    def __post_init__(self):
        features = np.asarray(self.features, dtype=bool)
        labels = np.asarray(self.labels, dtype=bool)
        if features.ndim != 2 or labels.ndim != 1:
            raise DataError("features must be 2-D and labels 1-D")
        if features.shape[0] != labels.shape[0]:
            raise DataError("features and labels row counts differ")
        names = tuple(self.feature_names) or tuple(
            f"f{i}" for i in range(features.shape[1])
        )
        if len(names) != features.shape[1]:
            raise DataError("feature_names length does not match features")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", names)

    @property
    def n(self):
        return self.features.shape[0]

    @property
    def m(self):
        return self.features.shape[1]

    def take(self, indices):
        return BinaryDataset(
            self.features[indices], self.labels[indices], self.feature_names
        )


@dataclass(frozen=True)
class MinedRuleSet:
    antecedents: tuple  # tuple of tuples of Literal, 1 or 2 literals each
    max_arity: int = 2

    def __len__(self):
        return len(self.antecedents)


def load_csv(path, label_column):
    """Read a prepared all-binary CSV into a BinaryDataset."""
    try:
        table = pd.read_csv(path, dtype=str)
    except FileNotFoundError:
        raise DataError(f"file not found: {path}") from None
    if label_column not in table.columns:
        raise DataError(f"missing label column {label_column!r}")
    for column in table.columns:
        bad = ~table[column].isin(["0", "1"])
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0])
            raise DataError(
                f"non-binary cell at row {row}, column {column!r}: "
                f"{table[column].iloc[row]!r}"
            )
    labels = table[label_column].astype(np.uint8).to_numpy()
    features = table.drop(columns=[label_column])
    return BinaryDataset(
        features.astype(np.uint8).to_numpy(),
        labels,
        tuple(features.columns),
    )


def _quantile_edges(values, bins):
    """Internal bin edges by the nearest-rank percentile; duplicate edges
    collapse."""
    ordered = np.sort(values)
    n = len(ordered)
    edges = []
    for i in range(1, bins):
        rank = max(int(np.ceil(i / bins * n)) - 1, 0)
        edges.append(ordered[rank])
    return sorted(set(edges))


def binarize(raw_table, numeric_bins, label_column, drop_columns=()):
    """One-hot encode categorical columns and threshold numeric columns at
    their quantile edges. Deterministic for a fixed input."""
    if numeric_bins < 2:
        raise DataError("numeric_bins must be >= 2")
    if label_column not in raw_table.columns:
        raise DataError(f"missing label column {label_column!r}")
    table = raw_table.drop(columns=list(drop_columns), errors="ignore")

    raw_labels = table[label_column]
    uniques = sorted(raw_labels.dropna().unique(), key=str)
    if set(uniques) <= {0, 1}:
        labels = raw_labels.astype(np.uint8).to_numpy()
    elif len(uniques) == 2:
        warnings.warn(
            f"label column {label_column!r} values {uniques} mapped to 0/1"
        )
        labels = (raw_labels == uniques[1]).astype(np.uint8).to_numpy()
    else:
        raise DataError(f"label column {label_column!r} is not binary")

    columns = {}
    for column in table.columns:
        if column == label_column:
            continue
        series = table[column]
        if pd.api.types.is_numeric_dtype(series):
            values = series.to_numpy(dtype=np.float64)
            if np.all(values == values[0]):
                warnings.warn(f"constant numeric column {column!r}")
                columns[f"{column}<=max"] = np.ones(len(series), dtype=np.uint8)
                continue
            edges = _quantile_edges(values, numeric_bins)
            for edge in edges:
                columns[f"{column}<={edge:g}"] = (values <= edge).astype(np.uint8)
        else:
            for value in sorted(series.astype(str).unique()):
                columns[f"{column}={value}"] = (
                    series.astype(str) == value
                ).astype(np.uint8).to_numpy()
    if not columns:
        raise DataError("no feature columns remain after binarization")
    features = np.column_stack(list(columns.values()))
    return BinaryDataset(features, labels, tuple(columns.keys()))


def split(dataset, train_fraction, seed):
    """Disjoint train/test row partition of sizes floor(train_fraction*n) and
    the remainder; deterministic per seed."""
    if not 0.0 < train_fraction < 1.0:
        raise DataError("train_fraction must be in (0, 1)")
    n_train = int(np.floor(train_fraction * dataset.n))
    if n_train < 1:
        raise DataError("train split would be empty")
    order = np.random.default_rng(seed).permutation(dataset.n)
    return dataset.take(np.sort(order[:n_train])), dataset.take(
        np.sort(order[n_train:])
    )


def antecedent_matches(antecedent, features):
    """Boolean vector: rows on which every literal of the antecedent holds.
    The empty antecedent matches every row."""
    out = np.ones(features.shape[0], dtype=bool)
    for literal in antecedent:
        col = features[:, literal.feature_index]
        out &= ~col if literal.negated else col
    return out


def mine_rules(dataset, max_arity=2, min_support_fraction=0.0):
    """Enumerate all 1-literal (and, for max_arity=2, 2-literal over distinct
    features) conjunctions with training support >= min_support_fraction * n.
    Ordering is lexicographic by feature index, positive before negated."""
    if max_arity not in (1, 2):
        raise DataError("max_arity must be 1 or 2")
    literals = [
        Literal(i, negated)
        for i in range(dataset.m)
        for negated in (False, True)
    ]
    antecedents = [(lit,) for lit in literals]
    if max_arity == 2:
        for a in range(len(literals)):
            for b in range(a + 1, len(literals)):
                if literals[a].feature_index == literals[b].feature_index:
                    continue
                antecedents.append((literals[a], literals[b]))
    min_count = min_support_fraction * dataset.n
    kept = tuple(
        ant
        for ant in antecedents
        if antecedent_matches(ant, dataset.features).sum() >= min_count
    )
    if not kept:
        raise EmptyRuleSetError(
            "no antecedent satisfies the support filter; nothing to learn from"
        )
    return MinedRuleSet(kept, max_arity)


def read_recipe(path):
    """Parse a key=value prepared-dataset recipe. Known keys: label, drop
    (comma separated), bins."""
    recipe = {}
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DataError(f"malformed recipe line: {line!r}")
            key, value = line.split("=", 1)
            recipe[key.strip()] = value.strip()
    if "label" not in recipe:
        raise DataError("recipe must set label=<column>")
    recipe.setdefault("bins", "2")
    recipe["drop"] = [
        c.strip() for c in recipe.get("drop", "").split(",") if c.strip()
    ]
    return recipe


def write_csv(dataset, path, label_column="label"):
    """Emit a prepared CSV that load_csv round-trips bit-exactly."""
    frame = pd.DataFrame(
        dataset.features.astype(np.uint8), columns=list(dataset.feature_names)
    )
    frame[label_column] = dataset.labels.astype(np.uint8)
    frame.to_csv(path, index=False)
