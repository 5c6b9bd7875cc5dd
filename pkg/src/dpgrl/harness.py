"""Sweep orchestration: train/evaluate across (mechanism, epsilon, run) and
emit the result tables."""

import csv
import hashlib
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dataset import DataError, mine_rules, split
from .evaluation import vulnerability
from .gini import SensitivityContext, smooth_sensitivity
from .learner import LearnerConfig, dp_greedy_rl, greedy_rl
from .mechanisms import MechanismKind, NoiseSource, make_budget
from .rulelist import accuracy

RESULTS_HEADER = [
    "mechanism",
    "epsilon",
    "run",
    "seed",
    "test_accuracy",
    "vulnerability",
    "length",
    "stop_reason",
    "wall_ms",
]
AGGREGATE_HEADER = [
    "mechanism",
    "epsilon",
    "mean_acc",
    "std_acc",
    "mean_vuln",
    "std_vuln",
]
NOISE_HEADER = ["n", "smooth_scale", "global_scale"]


@dataclass
class SweepSpec:
    mechanisms: list
    epsilon_grid: list
    runs: int
    base_seed: int
    max_length: int = 5
    min_support_fraction: float = 0.05
    confidence: float = 0.99
    train_fraction: float = 0.7
    max_arity: int = 2
    mine_min_support: float = 0.0
    release_counts: bool = True
    gamma: float = 2.0
    workers: int = 1

    def __post_init__(self):
        if self.runs < 1:
            raise DataError("runs must be >= 1")
        grid = list(self.epsilon_grid)
        if not grid or any(e <= 0.0 for e in grid):
            raise DataError("epsilon grid must be strictly positive")
        if grid != sorted(grid):
            raise DataError("epsilon grid must be sorted")
        self.mechanisms = [
            m if isinstance(m, MechanismKind) else MechanismKind(m)
            for m in self.mechanisms
        ]


@dataclass
class SweepRecord:
    mechanism: str
    epsilon: float
    run: int
    seed: int
    test_accuracy: float
    vulnerability: float
    length: int
    stop_reason: str
    wall_ms: float
    error: str = None


def record_seed(base_seed, eps_index, run):
    """Stable per-record seed, order-independent and shared by every
    mechanism so cross-mechanism comparisons are paired on the same split."""
    tag = f"{base_seed}:{eps_index}:{run}".encode()
    return int.from_bytes(hashlib.sha256(tag).digest()[:8], "big") % 2**63


def _run_record(args):
    dataset, rules, spec, mechanism, eps_index, epsilon, run = args
    seed = record_seed(spec.base_seed, eps_index, run)
    try:
        train, test = split(dataset, spec.train_fraction, seed)
        start = time.perf_counter()
        if mechanism is MechanismKind.NON_PRIVATE:
            config = LearnerConfig(
                spec.max_length, spec.min_support_fraction, spec.confidence
            )
            model = greedy_rl(train, rules, config)
            stop = "NON_PRIVATE"
        else:
            budget = make_budget(
                epsilon,
                1.0 / train.n**2,
                spec.max_length,
                spec.release_counts,
            )
            config = LearnerConfig(
                spec.max_length,
                spec.min_support_fraction,
                spec.confidence,
                mechanism,
                budget,
                spec.gamma,
                seed,
            )
            model, trace = dp_greedy_rl(train, rules, config, NoiseSource(seed))
            stop = trace.stop_reason.value
        wall_ms = (time.perf_counter() - start) * 1e3
        return SweepRecord(
            mechanism.value,
            epsilon,
            run,
            seed,
            accuracy(model, test),
            vulnerability(model, train, test).overall,
            len(model),
            stop,
            wall_ms,
        )
    except Exception as exc:  # flagged, not fatal: the sweep continues
        return SweepRecord(
            mechanism.value, epsilon, run, seed, float("nan"), float("nan"),
            0, "ERROR", 0.0, error=f"{type(exc).__name__}: {exc}",
        )


def run_sweep(spec, dataset):
    """One record per (mechanism, epsilon, run) with a fresh seeded split.
    Deterministic regardless of execution order or worker count."""
    # the candidate rule set is treated as public: mined once from the full
    # table, not per split
    rules = mine_rules(dataset, spec.max_arity, spec.mine_min_support)
    jobs = [
        (dataset, rules, spec, mech, eps_index, epsilon, run)
        for mech in spec.mechanisms
        for eps_index, epsilon in enumerate(spec.epsilon_grid)
        for run in range(spec.runs)
    ]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            records = list(pool.map(_run_record, jobs))
    else:
        records = [_run_record(job) for job in jobs]
    return records


def aggregate(records):
    """Per (mechanism, epsilon) mean/std of accuracy and vulnerability over
    the non-failed runs."""
    groups = {}
    for record in records:
        if record.error is not None:
            continue
        groups.setdefault((record.mechanism, record.epsilon), []).append(record)
    rows = []
    for (mechanism, epsilon), bucket in sorted(groups.items()):
        acc = np.array([r.test_accuracy for r in bucket])
        vuln = np.array([r.vulnerability for r in bucket])
        rows.append(
            {
                "mechanism": mechanism,
                "epsilon": epsilon,
                "mean_acc": float(acc.mean()),
                "std_acc": float(acc.std()),
                "mean_vuln": float(vuln.mean()),
                "std_vuln": float(vuln.std()),
            }
        )
    return rows


def write_records_csv(records, path):
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(RESULTS_HEADER)
        for r in records:
            writer.writerow(
                [
                    r.mechanism,
                    repr(r.epsilon),
                    r.run,
                    r.seed,
                    repr(r.test_accuracy),
                    repr(r.vulnerability),
                    r.length,
                    r.stop_reason,
                    repr(r.wall_ms),
                ]
            )


def write_aggregate_csv(records, path):
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(AGGREGATE_HEADER)
        for row in aggregate(records):
            writer.writerow(
                [
                    row["mechanism"],
                    repr(row["epsilon"]),
                    repr(row["mean_acc"]),
                    repr(row["std_acc"]),
                    repr(row["mean_vuln"]),
                    repr(row["std_vuln"]),
                ]
            )


def noise_scale_table(n_grid, lam_abs, eps, delta, max_length):
    """Laplace noise scales at matched per-node budget: smooth 2*S*/eps_node
    per n versus the constant global 2*0.5/eps_node."""
    budget = make_budget(eps, delta, max_length, release_counts=True)
    rows = []
    for n in n_grid:
        if n < lam_abs:
            raise DataError(f"n={n} below minimum support {lam_abs}")
        s_star = smooth_sensitivity(SensitivityContext(n, lam_abs, budget.beta))
        rows.append(
            {
                "n": n,
                "smooth_scale": 2.0 * s_star / budget.epsilon_node,
                "global_scale": 2.0 * 0.5 / budget.epsilon_node,
            }
        )
    return rows


def write_noise_csv(rows, path):
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(NOISE_HEADER)
        for row in rows:
            writer.writerow(
                [row["n"], repr(row["smooth_scale"]), repr(row["global_scale"])]
            )


def default_epsilon_grid(points=12, low=0.01, high=100.0):
    return list(np.geomspace(low, high, points))
