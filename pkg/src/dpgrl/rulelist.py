"""Rules, rule lists, their evaluation and persistence."""

import json
from dataclasses import dataclass, field

import numpy as np

from .dataset import DataError, Literal, antecedent_matches


@dataclass(frozen=True)
class Rule:
    antecedent: tuple  # tuple of Literal; empty for the default rule
    consequent: bool

    @property
    def is_default(self):
        return len(self.antecedent) == 0


@dataclass(frozen=True)
class CaptureResult:
    captured_indices: np.ndarray
    remaining_indices: np.ndarray
    capture_label_count: tuple  # (label-0 count, label-1 count)


@dataclass
class RuleList:
    """Ordered rules ending in the always-true default rule. noisy_counts, if
    present, holds one (c0, c1) pair per rule (None where not released)."""

    rules: list
    feature_names: tuple = ()
    noisy_counts: list = field(default=None)

    def __post_init__(self):
        if not self.rules or not self.rules[-1].is_default:
            raise DataError("rule list must end with the default rule")
        if any(rule.is_default for rule in self.rules[:-1]):
            raise DataError("only the last rule may have an empty antecedent")
        if self.noisy_counts is not None and len(self.noisy_counts) != len(
            self.rules
        ):
            raise DataError("noisy_counts length must match rules")

    def __len__(self):
        return len(self.rules)


def capture(rule, dataset, active):
    """Split the active index set into rows caught by the rule's antecedent
    and the rest. The empty antecedent captures every active row."""
    active = np.asarray(active, dtype=np.int64)
    hit = antecedent_matches(rule.antecedent, dataset.features[active])
    captured = active[hit]
    labels = dataset.labels[captured]
    n1 = int(labels.sum())
    return CaptureResult(captured, active[~hit], (len(captured) - n1, n1))


def predict(rule_list, sample):
    """Label of the first rule whose antecedent matches; total thanks to the
    default rule."""
    sample = np.asarray(sample, dtype=bool)
    for rule in rule_list.rules:
        if all(
            (not sample[lit.feature_index]) if lit.negated else sample[lit.feature_index]
            for lit in rule.antecedent
        ):
            return bool(rule.consequent)
    raise AssertionError("unreachable: default rule matches everything")


def predict_batch(rule_list, features):
    features = np.asarray(features, dtype=bool)
    out = np.empty(features.shape[0], dtype=bool)
    undecided = np.ones(features.shape[0], dtype=bool)
    for rule in rule_list.rules:
        hit = undecided & antecedent_matches(rule.antecedent, features)
        out[hit] = rule.consequent
        undecided &= ~hit
    return out


def accuracy(rule_list, dataset):
    """Fraction of rows classified correctly."""
    if dataset.n == 0:
        raise DataError("empty dataset")
    return float(np.mean(predict_batch(rule_list, dataset.features) == dataset.labels))


def _antecedent_to_names(antecedent, feature_names):
    return [lit.name(feature_names) for lit in antecedent]


def _antecedent_from_names(names, feature_names):
    index = {name: i for i, name in enumerate(feature_names)}
    literals = []
    for name in names:
        negated = name.startswith("not ")
        base = name[4:] if negated else name
        if base not in index:
            raise DataError(f"unknown feature {base!r} in model file")
        literals.append(Literal(index[base], negated))
    return tuple(literals)


def to_json(rule_list):
    entries = []
    for i, rule in enumerate(rule_list.rules):
        entry = {
            "antecedent": _antecedent_to_names(
                rule.antecedent, rule_list.feature_names
            ),
            "prediction": int(rule.consequent),
        }
        counts = (
            rule_list.noisy_counts[i] if rule_list.noisy_counts is not None else None
        )
        if counts is not None:
            entry["noisy_c0"], entry["noisy_c1"] = float(counts[0]), float(counts[1])
        entries.append(entry)
    return {"feature_names": list(rule_list.feature_names), "rules": entries}


def from_json(payload):
    feature_names = tuple(payload["feature_names"])
    rules = []
    noisy_counts = []
    for entry in payload["rules"]:
        rules.append(
            Rule(
                _antecedent_from_names(entry["antecedent"], feature_names),
                bool(entry["prediction"]),
            )
        )
        if "noisy_c0" in entry:
            noisy_counts.append((entry["noisy_c0"], entry["noisy_c1"]))
        else:
            noisy_counts.append(None)
    if all(c is None for c in noisy_counts):
        noisy_counts = None
    return RuleList(rules, feature_names, noisy_counts)


def save(rule_list, path):
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(to_json(rule_list), handle, indent=2)
        handle.write("\n")


def load(path):
    with open(path, encoding="utf-8") as handle:
        return from_json(json.load(handle))


def pretty(rule_list, positive="yes", negative="no"):
    """Human-readable if / else-if rendering."""
    lines = []
    for i, rule in enumerate(rule_list.rules):
        label = positive if rule.consequent else negative
        if rule.is_default:
            lines.append(f"else {label}")
        else:
            cond = " && ".join(
                _antecedent_to_names(rule.antecedent, rule_list.feature_names)
            )
            keyword = "if" if i == 0 else "else if"
            lines.append(f"{keyword} [{cond}] then {label}")
    return "\n".join(lines)
