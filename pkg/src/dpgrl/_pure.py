"""Pure-numpy fallbacks for the compiled kernels in dpgrl._speedups."""

import numpy as np


def smooth_oracle(n_remaining, lambda_abs, beta):
    """Exhaustive max over k in [0, n_remaining - lambda_abs] of
    exp(-beta*k) * g(max(lambda_abs, n_remaining - k))."""
    k = np.arange(n_remaining - lambda_abs + 1, dtype=np.float64)
    x = np.maximum(float(lambda_abs), n_remaining - k)
    gx = 1.0 - (x / (x + 1.0)) ** 2 - (1.0 / (x + 1.0)) ** 2
    return float(np.max(np.exp(-beta * k) * gx))


def rule_counts(capmat, labels, active):
    """For each rule row of capmat, count active samples captured and how many
    of those carry label 1. Returns (n_captured, captured_positive)."""
    hit = capmat & active[np.newaxis, :]
    nc = hit.sum(axis=1, dtype=np.int64)
    pc = (hit & labels[np.newaxis, :]).sum(axis=1, dtype=np.int64)
    return nc, pc
