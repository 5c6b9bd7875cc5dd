"""Benchmark the compiled kernels against the pure-numpy fallbacks.

Usage: python3 benchmarks/bench_backends.py [--repeats N]
"""

import argparse
import time

import numpy as np

from dpgrl import _pure

try:
    from dpgrl import _speedups
except ImportError:
    _speedups = None


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_smooth_oracle(repeats):
    cases = [(2000, 50, 0.01), (20_000, 50, 0.001), (200_000, 50, 1e-4)]
    print("smooth_oracle (exhaustive smooth-sensitivity search)")
    for n, lam, beta in cases:
        row = f"  n={n:>7} lam={lam} beta={beta:g}:"
        pure = _time(lambda: _pure.smooth_oracle(n, lam, beta), repeats)
        row += f" pure {pure * 1e3:8.3f} ms"
        if _speedups is not None:
            ext = _time(lambda: _speedups.smooth_oracle(n, lam, beta), repeats)
            row += f" | ext {ext * 1e3:8.3f} ms | speedup {pure / ext:5.1f}x"
        print(row)


def bench_rule_counts(repeats):
    rng = np.random.default_rng(0)
    cases = [(200, 5_000), (500, 20_000), (2_000, 50_000)]
    print("rule_counts (per-rule capture counting)")
    for n_rules, n_samples in cases:
        capmat = (rng.random((n_rules, n_samples)) < 0.3).astype(np.uint8)
        labels = (rng.random(n_samples) < 0.5).astype(np.uint8)
        active = (rng.random(n_samples) < 0.7).astype(np.uint8)
        row = f"  rules={n_rules:>5} samples={n_samples:>6}:"
        pure = _time(lambda: _pure.rule_counts(capmat, labels, active), repeats)
        row += f" pure {pure * 1e3:8.3f} ms"
        if _speedups is not None:
            ext = _time(
                lambda: _speedups.rule_counts(capmat, labels, active), repeats
            )
            row += f" | ext {ext * 1e3:8.3f} ms | speedup {pure / ext:5.1f}x"
        print(row)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    if _speedups is None:
        print("compiled extension not built; timing the pure backend only")
    bench_smooth_oracle(args.repeats)
    bench_rule_counts(args.repeats)


if __name__ == "__main__":
    main()
