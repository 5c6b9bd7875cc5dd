"""Accuracy reporting and the distributional-overfitting vulnerability score."""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .dataset import antecedent_matches
from .rulelist import accuracy


@dataclass
class VulnerabilityReport:
    tau_per_label: dict
    label_priors: dict
    overall: float
    missing_labels: list = field(default_factory=list)

    def to_json(self):
        return {
            "tau": {str(k): v for k, v in self.tau_per_label.items()},
            "priors": {str(k): v for k, v in self.label_priors.items()},
            "vulnerability": self.overall,
            "missing_labels": self.missing_labels,
        }


def _capture_fractions(rule_list, dataset, label):
    """P[r | y, M]: per rule, the fraction of label-y samples caught by that
    rule under first-match evaluation. Sums to 1 over the list."""
    mask = dataset.labels == label
    total = int(mask.sum())
    undecided = np.ones(dataset.n, dtype=bool)
    fractions = []
    for rule in rule_list.rules:
        hit = undecided & antecedent_matches(rule.antecedent, dataset.features)
        fractions.append((hit & mask).sum() / total if total else 0.0)
        undecided &= ~hit
    return np.asarray(fractions), total


def vulnerability(rule_list, train, test):
    """Half plus half the prior-weighted total-variation distance between the
    per-rule capture distributions on the training and test sets."""
    pooled = np.concatenate([train.labels, test.labels])
    tau = {}
    priors = {}
    missing = []
    for label in (0, 1):
        priors[label] = float(np.mean(pooled == label))
        inside, n_in = _capture_fractions(rule_list, train, label)
        outside, n_out = _capture_fractions(rule_list, test, label)
        if n_in == 0 or n_out == 0:
            warnings.warn(f"label {label} absent from one set; tau set to 0")
            missing.append(label)
            tau[label] = 0.0
        else:
            tau[label] = 0.5 * float(np.abs(inside - outside).sum())
    overall = 0.5 + 0.5 * sum(priors[y] * tau[y] for y in (0, 1))
    return VulnerabilityReport(tau, priors, overall, missing)


def accuracy_report(rule_list, test):
    return accuracy(rule_list, test)


def evaluation_json(rule_list, train, test):
    report = vulnerability(rule_list, train, test)
    payload = report.to_json()
    payload["test_accuracy"] = accuracy_report(rule_list, test)
    payload["train_accuracy"] = accuracy_report(rule_list, train)
    return payload
