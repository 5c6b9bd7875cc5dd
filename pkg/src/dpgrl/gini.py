"""Gini impurity reduction and its local / smooth sensitivity.

The smooth sensitivity of the Gini impurity depends only on the number of
samples left to classify (n_remaining), the absolute minimum support
(lambda_abs) and the smoothing parameter beta. A closed form evaluates at most
four candidate offsets; smooth_sensitivity_oracle performs the exhaustive
search and is kept as an independent cross-check.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import backend

# beta values for which the discriminant of the candidate polynomial vanishes;
# the closed form is not defined there, so they are rejected up front.
BETA_EXCLUDED = (3.0 - 2.0 * math.sqrt(2.0), 3.0 + 2.0 * math.sqrt(2.0))


class GiniError(ValueError):
    pass


@dataclass(frozen=True)
class GiniStats:
    """Label counts of the split a candidate rule induces on the remaining
    samples: captured side vs left (not captured) side."""

    n_captured: int
    n_left: int
    captured_positive: int
    left_positive: int

    def __post_init__(self):
        if self.n_captured < 0 or self.n_left < 0:
            raise GiniError("negative sample counts")
        if not 0 <= self.captured_positive <= self.n_captured:
            raise GiniError("captured_positive out of range")
        if not 0 <= self.left_positive <= self.n_left:
            raise GiniError("left_positive out of range")


@dataclass(frozen=True)
class SensitivityContext:
    """Inputs of the smooth-sensitivity closed form."""

    n_remaining: int
    lambda_abs: int
    beta: float

    def __post_init__(self):
        if self.lambda_abs < 1:
            raise GiniError("lambda_abs must be >= 1")
        if self.n_remaining < self.lambda_abs:
            raise GiniError("n_remaining must be >= lambda_abs")
        validate_beta(self.beta)


def validate_beta(beta):
    if not beta > 0.0:
        raise GiniError("beta must be > 0")
    if beta in BETA_EXCLUDED:
        raise GiniError(
            "beta = 3 +/- 2*sqrt(2) is not supported; pick any other value"
        )


def g(x):
    """Impurity bound curve: increasing on [0,1], decreasing on [1,inf),
    maximum g(1) = 0.5. Accepts scalars or numpy arrays."""
    x = np.asarray(x, dtype=np.float64)
    out = 1.0 - (x / (x + 1.0)) ** 2 - (1.0 / (x + 1.0)) ** 2
    return float(out) if out.ndim == 0 else out


def gini_reduction(stats: GiniStats) -> float:
    """Weighted binary Gini impurity of the (captured, left) split. A side
    with zero samples contributes 0."""
    total = stats.n_captured + stats.n_left
    if total < 1:
        raise GiniError("both sides of the split are empty")
    value = 0.0
    for n_side, pos in (
        (stats.n_captured, stats.captured_positive),
        (stats.n_left, stats.left_positive),
    ):
        if n_side == 0:
            continue
        y = pos / n_side
        value += (n_side / total) * (1.0 - y * y - (1.0 - y) * (1.0 - y))
    return value


def gini_reduction_many(n_captured, captured_positive, n_total, total_positive):
    """Vectorized gini_reduction for a batch of rules splitting the same
    remaining set of n_total samples with total_positive positives."""
    nc = np.asarray(n_captured, dtype=np.float64)
    pc = np.asarray(captured_positive, dtype=np.float64)
    if n_total <= 0:
        return np.zeros_like(nc)
    nl = float(n_total) - nc
    pl = float(total_positive) - pc
    out = np.zeros_like(nc)
    for n_side, pos in ((nc, pc), (nl, pl)):
        nonzero = n_side > 0
        y = np.divide(pos, n_side, out=np.zeros_like(nc), where=nonzero)
        term = (n_side / float(n_total)) * (1.0 - y * y - (1.0 - y) * (1.0 - y))
        out += np.where(nonzero, term, 0.0)
    return out


def local_sensitivity(n_remaining: int) -> float:
    """Worst-case Gini change when one sample is added or removed, given
    n_remaining samples left to classify."""
    if n_remaining < 1:
        raise GiniError("n_remaining must be >= 1")
    return g(float(n_remaining))


def _xi(k, n, lam, beta):
    return math.exp(-k * beta) * g(max(float(lam), float(n - k)))


def smooth_sensitivity(ctx: SensitivityContext) -> float:
    """Closed-form smooth sensitivity of the Gini impurity.

    Evaluates xi(k) = exp(-k*beta) * g(max(lambda_abs, n_remaining - k)) at
    k in {0, floor(t), ceil(t), n_remaining - lambda_abs} where t locates the
    interior maximum of xi. When the discriminant (1-beta)^2 - 4*beta is
    negative, xi has no interior critical point and the interior candidates
    are dropped; candidates falling outside [0, n_remaining - lambda_abs] are
    clamped to the nearest endpoint.
    """
    n, lam, beta = ctx.n_remaining, ctx.lambda_abs, ctx.beta
    k_max = n - lam
    candidates = {0, k_max}
    disc = (1.0 - beta) ** 2 - 4.0 * beta
    if disc >= 0.0:
        t = n - (1.0 - beta - math.sqrt(disc)) / (2.0 * beta)
        for k in (math.floor(t), math.ceil(t)):
            candidates.add(min(max(k, 0), k_max))
    return max(_xi(k, n, lam, beta) for k in candidates)


def smooth_sensitivity_oracle(ctx: SensitivityContext) -> float:
    """Exhaustive search over every distance k in [0, n_remaining -
    lambda_abs]. Beyond that range exp(-beta*k) decays while the impurity
    term stays at g(lambda_abs), so the finite range is exact."""
    return backend.smooth_oracle(ctx.n_remaining, ctx.lambda_abs, ctx.beta)
