"""Greedy rule-list learning: the exact baseline and its DP counterpart with
per-mechanism rule selection."""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import backend
from .dataset import DataError, antecedent_matches
from .gini import SensitivityContext, gini_reduction_many, smooth_sensitivity
from .mechanisms import (
    BudgetError,
    MechanismKind,
    NoiseSource,
    check_cauchy_beta,
    exponential_mechanism,
    mech_gaussian_global,
    mech_laplace_global,
    mech_cauchy_smooth,
    mech_laplace_smooth,
    sample_laplace,
)
from .rulelist import Rule, RuleList

GINI_GLOBAL_SENSITIVITY = 0.5
SMOOTH_MECHANISMS = (MechanismKind.SMOOTH_LAPLACE, MechanismKind.SMOOTH_CAUCHY)


class StopReason(Enum):
    MAX_LENGTH = "MAX_LENGTH"
    SUPPORT = "SUPPORT"
    NO_IMPROVEMENT = "NO_IMPROVEMENT"


@dataclass
class LearnerConfig:
    max_length: int
    min_support_fraction: float
    confidence: float = 0.99
    mechanism: MechanismKind = MechanismKind.NON_PRIVATE
    budget: object = None
    gamma: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if self.max_length < 1:
            raise DataError("max_length must be >= 1")
        if not 0.0 < self.min_support_fraction < 1.0:
            raise DataError("min_support_fraction must be in (0, 1)")
        if not 0.0 < self.confidence < 1.0:
            raise DataError("confidence must be in (0, 1)")
        if self.mechanism is not MechanismKind.NON_PRIVATE:
            if self.budget is None:
                raise BudgetError(f"{self.mechanism.value} requires a budget")
            if self.budget.max_length != self.max_length:
                raise BudgetError("budget.max_length differs from max_length")
            if self.mechanism is MechanismKind.SMOOTH_CAUCHY:
                if self.gamma <= 1.0:
                    raise BudgetError("gamma must be > 1")
                check_cauchy_beta(
                    self.budget.beta, self.budget.epsilon_node, self.gamma
                )


@dataclass
class Access:
    node: int
    kind: str  # support | select | pred
    budgeted: bool


@dataclass
class NodeRecord:
    node: int
    rule_index: int = None
    noisy_gini: float = None
    noisy_support: float = None


@dataclass
class TrainTrace:
    mechanism: str
    stop_reason: StopReason = None
    nodes: list = field(default_factory=list)
    accesses: list = field(default_factory=list)

    def budgeted_per_node(self):
        counts = {}
        for access in self.accesses:
            if access.budgeted:
                counts[access.node] = counts.get(access.node, 0) + 1
        return counts


def confidence_threshold(confidence, eps_node):
    """Integer margin added to the minimum support so the noisy support check
    keeps the support constraint with the requested confidence."""
    if not 0.0 < confidence < 1.0:
        raise DataError("confidence must be in (0, 1)")
    if eps_node <= 0.0:
        raise DataError("eps_node must be > 0")
    return math.floor(-(math.log(2.0) + math.log(1.0 - confidence)) / eps_node) + 1


def pred_dp(antecedent, dataset, active_mask, eps_node, source):
    """Noisy label counts of the samples the antecedent captures among the
    active rows (empty antecedent captures all) and the resulting prediction;
    ties predict 1."""
    hit = active_mask & antecedent_matches(antecedent, dataset.features)
    c1_exact = int(dataset.labels[hit].sum())
    c0_exact = int(hit.sum()) - c1_exact
    c0 = mech_laplace_global(float(c0_exact), 1.0, eps_node, source)
    c1 = mech_laplace_global(float(c1_exact), 1.0, eps_node, source)
    return (False if c0 > c1 else True), c0, c1


def _capture_matrix(train, rules):
    capmat = np.zeros((len(rules), train.n), dtype=np.uint8)
    for i, antecedent in enumerate(rules.antecedents):
        capmat[i] = antecedent_matches(antecedent, train.features)
    return capmat


def _majority(labels):
    ones = int(labels.sum())
    return ones >= len(labels) - ones  # tie predicts 1, matching pred_dp


def greedy_rl(train, rules, config):
    """Non-private baseline: append the exact-Gini-minimizing rule while it
    strictly improves on the unsplit impurity and support allows."""
    if train.n < 1:
        raise DataError("empty training set")
    if len(rules) == 0:
        raise DataError("empty rule set")
    lam_abs = math.floor(train.n * config.min_support_fraction)
    if lam_abs < 1:
        raise DataError("min_support_fraction * n must be >= 1")

    capmat = _capture_matrix(train, rules)
    labels8 = train.labels.astype(np.uint8)
    active = np.ones(train.n, dtype=np.uint8)
    available = list(range(len(rules)))
    chosen = []

    while len(chosen) < config.max_length:
        n_rem = int(active.sum())
        if n_rem < lam_abs:
            break
        pos_rem = int((active & labels8).sum())
        nc, pc = backend.rule_counts(
            np.ascontiguousarray(capmat[available]), labels8, active
        )
        ginis = gini_reduction_many(nc, pc, n_rem, pos_rem)
        bound = gini_reduction_many([0], [0], n_rem, pos_rem)[0]
        best = int(np.argmin(ginis))
        if not ginis[best] < bound:
            break
        rule_id = available.pop(best)
        captured = capmat[rule_id].astype(bool) & active.astype(bool)
        chosen.append(
            Rule(rules.antecedents[rule_id], _majority(train.labels[captured]))
        )
        active = (active.astype(bool) & ~capmat[rule_id].astype(bool)).astype(
            np.uint8
        )
        if not available:
            break

    default = Rule((), _majority(train.labels[active.astype(bool)]))
    return RuleList(chosen + [default], train.feature_names)


def _noisy_count_gini(c0, c1, l0, l1):
    """Gini reduction recomputed from noisy (possibly negative) counts;
    post-processing, so clamping is free."""
    c0, c1, l0, l1 = (max(v, 0.0) for v in (c0, c1, l0, l1))
    total = c0 + c1 + l0 + l1
    if total <= 0.0:
        return 0.0
    value = 0.0
    for a, b in ((c0, c1), (l0, l1)):
        side = a + b
        if side <= 0.0:
            continue
        y = b / side
        value += (side / total) * (1.0 - y * y - (1.0 - y) * (1.0 - y))
    return value


class _Selector:
    """One node's rule selection; draws noise lazily in mined-rule order so
    seeded runs reproduce bit-exactly."""

    def __init__(self, config, source, lam_abs, n_rules_initial):
        self.config = config
        self.source = source
        self.lam_abs = lam_abs
        self.eps_node = config.budget.epsilon_node
        self.delta_node = config.budget.delta_node
        self.beta = config.budget.beta
        # budget per individual count for the noisy-counts variant
        self.eps_count = self.eps_node / (2 * n_rules_initial)

    def _additive(self, values, bound, n_rem):
        kind = self.config.mechanism
        if kind in SMOOTH_MECHANISMS:
            s_star = smooth_sensitivity(
                SensitivityContext(n_rem, self.lam_abs, self.beta)
            )
            if kind is MechanismKind.SMOOTH_LAPLACE:
                noise = lambda v: mech_laplace_smooth(
                    v, s_star, self.eps_node, self.source
                )
            else:
                noise = lambda v: mech_cauchy_smooth(
                    v, s_star, self.eps_node, self.config.gamma, self.source
                )
        elif kind is MechanismKind.GLOBAL_LAPLACE:
            noise = lambda v: mech_laplace_global(
                v, GINI_GLOBAL_SENSITIVITY, self.eps_node, self.source
            )
        else:  # GLOBAL_GAUSSIAN
            noise = lambda v: mech_gaussian_global(
                v,
                GINI_GLOBAL_SENSITIVITY,
                self.eps_node,
                self.delta_node,
                self.source,
            )
        noisy_bound = noise(bound)
        noisy = [noise(v) for v in values]
        best = int(np.argmin(noisy))
        if noisy[best] < noisy_bound:
            return best, noisy[best], None
        return None, noisy_bound, None

    def _exponential(self, values, bound):
        utilities = np.concatenate(([-bound], -np.asarray(values)))
        idx = exponential_mechanism(
            utilities, GINI_GLOBAL_SENSITIVITY, self.eps_node, self.source
        )
        if idx == 0:
            return None, float(bound), None
        return idx - 1, float(values[idx - 1]), None

    def _noisy_counts(self, nc, pc, n_rem, pos_rem):
        lap = lambda v: v + sample_laplace(self.source, 1.0 / self.eps_count)
        t1 = lap(float(pos_rem))
        t0 = lap(float(n_rem - pos_rem))
        bound = _noisy_count_gini(0.0, 0.0, t0, t1)
        noisy = []
        counts = []
        for c, p in zip(nc, pc):
            c0 = lap(float(c - p))
            c1 = lap(float(p))
            counts.append((c0, c1))
            noisy.append(_noisy_count_gini(c0, c1, t0 - c0, t1 - c1))
        best = int(np.argmin(noisy))
        if noisy[best] < bound:
            return best, noisy[best], counts[best]
        return None, bound, None

    def select(self, nc, pc, n_rem, pos_rem):
        """Returns (winner position or None, its noisy score, winner noisy
        counts for the noisy-counts variant)."""
        values = gini_reduction_many(nc, pc, n_rem, pos_rem)
        bound = gini_reduction_many([0], [0], n_rem, pos_rem)[0]
        kind = self.config.mechanism
        if kind is MechanismKind.EXPONENTIAL:
            return self._exponential(values, bound)
        if kind is MechanismKind.NOISY_COUNTS:
            return self._noisy_counts(nc, pc, n_rem, pos_rem)
        return self._additive(values, bound, n_rem)


def dp_greedy_rl(train, rules, config, source=None):
    """Differentially-private greedy rule list: noisy support check, noisy-min
    rule selection (one budget access per node) and DP predictions."""
    if config.mechanism is MechanismKind.NON_PRIVATE:
        raise BudgetError("use greedy_rl for the non-private baseline")
    if train.n < 1:
        raise DataError("empty training set")
    if len(rules) == 0:
        raise DataError("empty rule set")
    budget = config.budget
    lam_abs = math.floor(train.n * config.min_support_fraction)
    if lam_abs < 1:
        raise DataError("min_support_fraction * n must be >= 1")
    if source is None:
        source = NoiseSource(config.seed)

    smooth = config.mechanism in SMOOTH_MECHANISMS
    threshold = (
        confidence_threshold(config.confidence, budget.epsilon_node)
        if smooth
        else 0
    )
    selector = _Selector(config, source, lam_abs, len(rules))
    trace = TrainTrace(config.mechanism.value)

    capmat = _capture_matrix(train, rules)
    labels8 = train.labels.astype(np.uint8)
    active = np.ones(train.n, dtype=np.uint8)
    available = list(range(len(rules)))
    chosen = []
    chosen_counts = []
    stop = None
    node = 0

    while len(chosen) < config.max_length:
        record = NodeRecord(node)
        n_rem = int(active.sum())

        noisy_support = mech_laplace_global(
            float(n_rem), 1.0, budget.epsilon_node, source
        )
        trace.accesses.append(Access(node, "support", True))
        record.noisy_support = noisy_support
        if noisy_support < lam_abs + threshold:
            stop = StopReason.SUPPORT
            trace.nodes.append(record)
            break

        pos_rem = int((active & labels8).sum())
        nc, pc = backend.rule_counts(
            np.ascontiguousarray(capmat[available]), labels8, active
        )
        winner, noisy_gini, winner_counts = selector.select(
            nc, pc, n_rem, pos_rem
        )
        trace.accesses.append(Access(node, "select", True))
        record.noisy_gini = noisy_gini
        if winner is None:
            stop = StopReason.NO_IMPROVEMENT
            trace.nodes.append(record)
            break

        rule_id = available.pop(winner)
        record.rule_index = rule_id
        if config.mechanism is MechanismKind.NOISY_COUNTS:
            # prediction post-processed from the selection's noisy counts
            c0, c1 = winner_counts
            prediction = False if c0 > c1 else True
        else:
            prediction, c0, c1 = pred_dp(
                rules.antecedents[rule_id],
                train,
                active.astype(bool),
                budget.epsilon_node,
                source,
            )
            trace.accesses.append(Access(node, "pred", budget.release_counts))
        chosen.append(Rule(rules.antecedents[rule_id], prediction))
        chosen_counts.append((c0, c1))
        active = (active.astype(bool) & ~capmat[rule_id].astype(bool)).astype(
            np.uint8
        )
        trace.nodes.append(record)
        node += 1
        if not available:
            stop = StopReason.NO_IMPROVEMENT
            break

    if stop is None:
        stop = StopReason.MAX_LENGTH
    trace.stop_reason = stop

    default_pred, d0, d1 = pred_dp(
        (), train, active.astype(bool), budget.epsilon_node, source
    )
    trace.accesses.append(Access(node, "pred", budget.release_counts))
    chosen.append(Rule((), default_pred))
    chosen_counts.append((d0, d1))

    noisy_counts = chosen_counts if budget.release_counts else None
    return RuleList(chosen, train.feature_names, noisy_counts), trace


def trace_to_json(trace, budget):
    return {
        "mechanism": trace.mechanism,
        "stop_reason": trace.stop_reason.value,
        "budget": {
            "epsilon_total": budget.epsilon_total,
            "delta_total": budget.delta_total,
            "max_length": budget.max_length,
            "release_counts": budget.release_counts,
            "epsilon_node": budget.epsilon_node,
            "delta_node": budget.delta_node,
            "beta": budget.beta,
        },
        "nodes": [
            {
                "node": r.node,
                "rule_index": r.rule_index,
                "noisy_gini": r.noisy_gini,
                "noisy_support": r.noisy_support,
            }
            for r in trace.nodes
        ],
        "accesses": [
            {"node": a.node, "kind": a.kind, "budgeted": a.budgeted}
            for a in trace.accesses
        ],
    }


def trace_from_json(payload):
    trace = TrainTrace(payload["mechanism"], StopReason(payload["stop_reason"]))
    trace.nodes = [
        NodeRecord(r["node"], r["rule_index"], r["noisy_gini"], r["noisy_support"])
        for r in payload["nodes"]
    ]
    trace.accesses = [
        Access(a["node"], a["kind"], a["budgeted"]) for a in payload["accesses"]
    ]
    return trace


def audit_trace(trace, budget):
    """Verify the per-node access accounting of a training trace: at most 3
    budgeted accesses per node when counts are released (2 otherwise), and at
    most one access of each kind per node. Returns (ok, report dict)."""
    allowed = 3 if budget.release_counts else 2
    per_node = trace.budgeted_per_node()
    violations = []
    for node, count in sorted(per_node.items()):
        if count > allowed:
            violations.append(
                f"node {node}: {count} budgeted accesses > {allowed}"
            )
    kinds_seen = {}
    for access in trace.accesses:
        key = (access.node, access.kind)
        kinds_seen[key] = kinds_seen.get(key, 0) + 1
        if kinds_seen[key] > 1:
            violations.append(f"node {access.node}: repeated {access.kind} access")
    total_budgeted = sum(per_node.values())
    report = {
        "mechanism": trace.mechanism,
        "stop_reason": trace.stop_reason.value,
        "nodes": len(trace.nodes),
        "budgeted_accesses": total_budgeted,
        "allowed_per_node": allowed,
        "epsilon_consumed": total_budgeted * budget.epsilon_node,
        "violations": violations,
    }
    return not violations, report


def dp_greedy_rl_variant(train, rules, config, source=None):
    """dp_greedy_rl with the selection step given by config.mechanism; kept
    as a named entry point for the non-smooth variants."""
    return dp_greedy_rl(train, rules, config, source)
