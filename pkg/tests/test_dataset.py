"""CSV ingestion, binarization, splitting and rule mining."""

import numpy as np
import pandas as pd
import pytest

from dpgrl.dataset import (
    BinaryDataset,
    DataError,
    EmptyRuleSetError,
    Literal,
    antecedent_matches,
    binarize,
    load_csv,
    mine_rules,
    read_recipe,
    split,
    write_csv,
)


def test_binary_dataset_validation():
    with pytest.raises(DataError):
        BinaryDataset(np.zeros((3, 2)), np.zeros(4))
    with pytest.raises(DataError):
        BinaryDataset(np.zeros(3), np.zeros(3))
    with pytest.raises(DataError):
        BinaryDataset(np.zeros((3, 2)), np.zeros(3), ("only-one",))
    data = BinaryDataset(np.eye(3), np.ones(3))
    assert data.feature_names == ("f0", "f1", "f2")
    assert (data.n, data.m) == (3, 3)


def test_load_csv_roundtrip(tmp_path):
    data = BinaryDataset(
        np.array([[1, 0], [0, 1], [1, 1]]), np.array([1, 0, 1]), ("a", "b")
    )
    path = tmp_path / "data.csv"
    write_csv(data, path, "label")
    loaded = load_csv(path, "label")
    assert np.array_equal(loaded.features, data.features)
    assert np.array_equal(loaded.labels, data.labels)
    assert loaded.feature_names == data.feature_names


def test_load_csv_errors(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,label\n1,0\n2,1\n")
    with pytest.raises(DataError, match="row 1, column 'a'"):
        load_csv(path, "label")
    path.write_text("a,b\n1,0\n")
    with pytest.raises(DataError, match="missing label"):
        load_csv(path, "label")
    with pytest.raises(DataError, match="not found"):
        load_csv(tmp_path / "absent.csv", "label")


def test_binarize_numeric_two_bins():
    table = pd.DataFrame({"age": [10, 20, 30, 40], "label": [0, 1, 0, 1]})
    data = binarize(table, 2, "label")
    # one threshold indicator at the median edge: rows <= 20
    assert data.m == 1
    assert data.feature_names == ("age<=20",)
    assert list(data.features[:, 0]) == [True, True, False, False]


def test_binarize_categorical_and_drop():
    table = pd.DataFrame(
        {
            "color": ["red", "blue", "red"],
            "id": [1, 2, 3],
            "label": [0, 1, 1],
        }
    )
    data = binarize(table, 2, "label", drop_columns=("id",))
    assert data.feature_names == ("color=blue", "color=red")
    assert list(data.features[:, 1]) == [True, False, True]


def test_binarize_constant_column_warns():
    table = pd.DataFrame({"x": [3.0, 3.0, 3.0], "label": [0, 1, 0]})
    with pytest.warns(UserWarning, match="constant"):
        data = binarize(table, 2, "label")
    assert data.features.all()


def test_binarize_label_mapping():
    table = pd.DataFrame({"x": [0, 1, 0], "label": ["bad", "good", "bad"]})
    with pytest.warns(UserWarning, match="mapped"):
        data = binarize(table, 2, "label")
    assert list(data.labels) == [False, True, False]
    table = pd.DataFrame({"x": [0, 1, 0], "label": ["a", "b", "c"]})
    with pytest.raises(DataError, match="not binary"):
        binarize(table, 2, "label")


def test_split_deterministic_and_disjoint():
    data = BinaryDataset(np.eye(10, 4), np.arange(10) % 2)
    train_a, test_a = split(data, 0.7, 3)
    train_b, test_b = split(data, 0.7, 3)
    assert np.array_equal(train_a.features, train_b.features)
    assert train_a.n == 7 and test_a.n == 3
    stacked = np.vstack([train_a.features, test_a.features])
    assert sorted(map(tuple, stacked)) == sorted(map(tuple, data.features))
    with pytest.raises(DataError):
        split(data, 0.0, 0)


def test_antecedent_matches():
    features = np.array([[1, 0], [1, 1], [0, 1]], dtype=bool)
    ant = (Literal(0, False), Literal(1, True))
    assert list(antecedent_matches(ant, features)) == [True, False, False]
    assert antecedent_matches((), features).all()


def test_mine_rules_order_and_support():
    data = BinaryDataset(
        np.array([[1, 0], [1, 0], [0, 1]], dtype=bool), np.array([1, 0, 1])
    )
    rules = mine_rules(data, 2, 0.0)
    # lexicographic by feature, positive first; pairs over distinct features
    assert rules.antecedents[0] == (Literal(0, False),)
    assert rules.antecedents[1] == (Literal(0, True),)
    assert rules.antecedents[2] == (Literal(1, False),)
    assert all(
        len({lit.feature_index for lit in ant}) == len(ant)
        for ant in rules.antecedents
    )
    singles = [a for a in rules.antecedents if len(a) == 1]
    assert len(singles) == 4
    filtered = mine_rules(data, 1, 0.5)
    # support filter: only literals matching >= 1.5 rows survive
    assert all(
        antecedent_matches(a, data.features).sum() >= 1.5
        for a in filtered.antecedents
    )
    with pytest.raises(EmptyRuleSetError):
        mine_rules(data, 1, 1.1)
    with pytest.raises(DataError):
        mine_rules(data, 3, 0.0)


def test_read_recipe(tmp_path):
    path = tmp_path / "recipe.txt"
    path.write_text("# comment\nlabel=y\nbins=3\ndrop=a, b\n")
    recipe = read_recipe(path)
    assert recipe["label"] == "y"
    assert recipe["bins"] == "3"
    assert recipe["drop"] == ["a", "b"]
    path.write_text("bins=2\n")
    with pytest.raises(DataError, match="label"):
        read_recipe(path)
    path.write_text("label=y\nmalformed line\n")
    with pytest.raises(DataError, match="malformed"):
        read_recipe(path)
