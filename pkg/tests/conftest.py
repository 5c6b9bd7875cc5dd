"""Shared fixtures: synthetic binary datasets with planted structure and a
curated positive-conjunction candidate set whose greedy path is tie-free."""

import math
import os
from itertools import combinations

import numpy as np
import pytest

from dpgrl.backend import rule_counts
from dpgrl.dataset import BinaryDataset, Literal, MinedRuleSet, split
from dpgrl.gini import gini_reduction_many
from dpgrl.learner import _capture_matrix, greedy_rl
from dpgrl.rulelist import capture

DATA_DIR = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data"
)


def synth_dataset(seed, n=900, m=8):
    """Random binary features with a planted logistic label rule mixing
    single features and pairwise interactions of graded strength."""
    rng = np.random.default_rng(seed)
    features = rng.random((n, m)) < rng.uniform(0.35, 0.65, size=m)
    x = features
    logits = (
        1.6 * x[:, 0]
        - 1.3 * x[:, 1]
        + 1.0 * (x[:, 2] & x[:, 3])
        - 0.8 * x[:, 4]
        + 0.6 * (x[:, 5] & x[:, 6])
        - 0.45 * x[:, 7]
        + 0.25 * (x[:, 0] & x[:, 5])
    )
    p = 1.0 / (1.0 + np.exp(-(logits - logits.mean())))
    labels = rng.random(n) < p
    return BinaryDataset(features, labels)


def positive_rules(m=8):
    """Positive-literal singles and distinct-feature pairs. Excluding negated
    literals avoids the structural gini tie between a rule and its complement
    (both induce the same split)."""
    antecedents = [(Literal(i, False),) for i in range(m)]
    antecedents += [
        (Literal(i, False), Literal(j, False))
        for i, j in combinations(range(m), 2)
    ]
    return MinedRuleSet(tuple(antecedents), 2)


def greedy_path_is_tie_free(train, rules, config, gap_tol=1e-6):
    """True when the greedy path has strictly separated gini values, no
    label-count ties inside decided groups and no support counts on the
    noisy-check boundary, so the noiseless limit of the DP learner is
    unambiguous."""
    base = greedy_rl(train, rules, config)
    lam_abs = math.floor(train.n * config.min_support_fraction)
    capmat = _capture_matrix(train, rules)
    labels8 = train.labels.astype(np.uint8)
    active = np.ones(train.n, dtype=np.uint8)
    available = list(range(len(rules)))
    for rule in base.rules[:-1]:
        n_rem = int(active.sum())
        if n_rem in (lam_abs, lam_abs + 1):
            return False
        pos_rem = int((active & labels8).sum())
        nc, pc = rule_counts(
            np.ascontiguousarray(capmat[available]), labels8, active
        )
        ginis = gini_reduction_many(nc, pc, n_rem, pos_rem)
        bound = gini_reduction_many([0], [0], n_rem, pos_rem)[0]
        order = np.argsort(ginis)
        if ginis[order[1]] - ginis[order[0]] < gap_tol:
            return False
        if bound - ginis[order[0]] < gap_tol:
            return False
        chosen = rules.antecedents.index(rule.antecedent)
        available.remove(chosen)
        active = (active.astype(bool) & ~capmat[chosen].astype(bool)).astype(
            np.uint8
        )
    if int(active.sum()) in (lam_abs, lam_abs + 1):
        return False
    indices = np.arange(train.n)
    for rule in base.rules:
        result = capture(rule, train, indices)
        c0, c1 = result.capture_label_count
        if c0 == c1:
            return False
        indices = result.remaining_indices
    return True


def planted_dataset(seed=7, n=600):
    """Small dataset whose labels follow two crisp planted rules."""
    rng = np.random.default_rng(seed)
    features = rng.random((n, 6)) < 0.5
    x = features
    labels = (x[:, 0] & ~x[:, 1]) | (
        x[:, 2] & x[:, 3] & (rng.random(n) < 0.9)
    )
    return BinaryDataset(features, labels)


@pytest.fixture
def planted():
    return planted_dataset()


@pytest.fixture
def planted_split():
    data = planted_dataset()
    return split(data, 0.7, 0)
