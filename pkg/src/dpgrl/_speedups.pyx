# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: exhaustive smooth-sensitivity search and per-rule
capture counting. Pure-numpy fallbacks live in dpgrl._pure; the two must stay
behaviourally identical (tested in tests/test_backends.py)."""

from libc.math cimport exp

import numpy as np

cimport numpy as cnp

cnp.import_array()


def smooth_oracle(long n_remaining, long lambda_abs, double beta):
    """Exhaustive max over k in [0, n_remaining - lambda_abs] of
    exp(-beta*k) * g(max(lambda_abs, n_remaining - k))."""
    cdef long k
    cdef double best = 0.0
    cdef double x, gx, v
    for k in range(n_remaining - lambda_abs + 1):
        x = <double> (n_remaining - k)
        if x < <double> lambda_abs:
            x = <double> lambda_abs
        gx = 1.0 - (x / (x + 1.0)) ** 2 - (1.0 / (x + 1.0)) ** 2
        v = exp(-beta * k) * gx
        if v > best:
            best = v
    return best


def rule_counts(cnp.uint8_t[:, ::1] capmat,
                cnp.uint8_t[::1] labels,
                cnp.uint8_t[::1] active):
    """For each rule row of capmat, count active samples captured and how many
    of those carry label 1. Returns (n_captured, captured_positive)."""
    cdef Py_ssize_t n_rules = capmat.shape[0]
    cdef Py_ssize_t n = capmat.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] nc = np.zeros(n_rules, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] pc = np.zeros(n_rules, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] active_pos = np.empty(
        n, dtype=np.uint8
    )
    cdef Py_ssize_t r, i
    cdef long c, p
    cdef cnp.uint8_t hit
    for i in range(n):
        active_pos[i] = active[i] & labels[i]
    # branchless accumulation so the compiler can vectorize the row scans
    for r in range(n_rules):
        c = 0
        p = 0
        for i in range(n):
            hit = capmat[r, i]
            c += hit & active[i]
            p += hit & active_pos[i]
        nc[r] = c
        pc[r] = p
    return nc, pc
