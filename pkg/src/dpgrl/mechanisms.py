"""Noise primitives, DP selection mechanisms and privacy-budget accounting."""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .gini import validate_beta


class BudgetError(ValueError):
    pass


class MechanismKind(Enum):
    GLOBAL_LAPLACE = "gl-laplace"
    GLOBAL_GAUSSIAN = "gl-gaussian"
    SMOOTH_LAPLACE = "sm-laplace"
    SMOOTH_CAUCHY = "sm-cauchy"
    EXPONENTIAL = "exponential"
    NOISY_COUNTS = "noisy-counts"
    NON_PRIVATE = "none"


@dataclass
class NoiseSource:
    """Seeded pseudo-random stream; identical seeds yield identical draws.
    Single-owner mutable state: never share one source across threads."""

    seed: int
    stream: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        self.stream = np.random.default_rng(self.seed)

    def uniform_open(self):
        """Uniform draw on the open interval (0, 1)."""
        while True:
            u = self.stream.random()
            if u > 0.0:
                return u


@dataclass(frozen=True)
class PrivacyBudget:
    epsilon_total: float
    delta_total: float
    max_length: int
    release_counts: bool
    epsilon_node: float
    delta_node: float
    beta: float


def make_budget(eps, delta, max_length, release_counts):
    """Split (eps, delta) into per-node budgets. Three budgeted accesses per
    node when the counts are released with the model, two otherwise."""
    if eps <= 0.0:
        raise BudgetError("epsilon must be > 0")
    if not 0.0 < delta < 1.0:
        raise BudgetError("delta must be in (0, 1)")
    if max_length < 2:
        raise BudgetError("max_length must be >= 2")
    denominator = 3 * max_length - 1 if release_counts else 2 * max_length - 1
    eps_node = eps / denominator
    delta_node = delta / (max_length - 1)
    beta = eps_node / (2.0 * math.log(2.0 / delta_node))
    try:
        validate_beta(beta)
    except ValueError as exc:
        raise BudgetError(str(exc)) from exc
    return PrivacyBudget(
        eps, delta, max_length, release_counts, eps_node, delta_node, beta
    )


def sample_laplace(source, scale_b):
    """One Laplace(scale_b) draw by inverse CDF."""
    if scale_b <= 0.0:
        raise ValueError("scale must be > 0")
    p = source.uniform_open() - 0.5
    return -scale_b * math.copysign(1.0, p) * math.log(1.0 - 2.0 * abs(p))


def sample_gaussian(source, sigma):
    if sigma <= 0.0:
        raise ValueError("sigma must be > 0")
    return sigma * float(source.stream.standard_normal())


def sample_cauchy(source, gamma=2.0):
    """Draw from density proportional to 1 / (1 + |z|^gamma), gamma > 1.
    gamma = 2 is the standard Cauchy via the tangent inverse CDF; other gamma
    use rejection against a flat-center / power-tail envelope."""
    if gamma <= 1.0:
        raise ValueError("gamma must be > 1")
    if gamma == 2.0:
        return math.tan(math.pi * (source.uniform_open() - 0.5))
    # Envelope e(z) = min(1, |z|^-gamma): target <= envelope pointwise, and
    # both pieces sample by inverse CDF. Acceptance probability >= 1/2.
    center_mass = (gamma - 1.0) / gamma
    while True:
        if source.uniform_open() < center_mass:
            z = 2.0 * source.uniform_open() - 1.0
            envelope = 1.0
        else:
            magnitude = source.uniform_open() ** (-1.0 / (gamma - 1.0))
            z = math.copysign(magnitude, source.uniform_open() - 0.5)
            envelope = abs(z) ** (-gamma)
        if source.uniform_open() * envelope <= 1.0 / (1.0 + abs(z) ** gamma):
            return z


def mech_laplace_global(value, delta1, eps, source):
    """value + Lap(delta1 / eps), the Laplace mechanism at global
    sensitivity delta1."""
    if delta1 <= 0.0 or eps <= 0.0:
        raise ValueError("delta1 and eps must be > 0")
    return value + sample_laplace(source, delta1 / eps)


def mech_gaussian_global(value, delta2, eps, delta, source):
    """value + N(0, sigma) with sigma = c * delta2 / eps and the smallest c
    satisfying c^2 > 2 ln(1.25/delta). The classical analysis assumes
    eps < 1; larger eps is accepted so degenerate low-noise runs work."""
    if delta2 <= 0.0 or eps <= 0.0 or not 0.0 < delta < 1.0:
        raise ValueError("invalid Gaussian mechanism parameters")
    c = math.sqrt(2.0 * math.log(1.25 / delta)) * (1.0 + 1e-9)
    return value + sample_gaussian(source, c * delta2 / eps)


def mech_laplace_smooth(value, s_star, eps, source):
    """value + (2 * s_star / eps) * Lap(1); requires the budget's beta bound
    beta <= eps / (2 ln(2/delta)), enforced at budget construction."""
    if eps <= 0.0 or s_star < 0.0:
        raise ValueError("invalid smooth Laplace parameters")
    if s_star == 0.0:
        return value
    return value + (2.0 * s_star / eps) * sample_laplace(source, 1.0)


def mech_cauchy_smooth(value, s_star, eps, gamma, source):
    """value + (2 * (gamma+1) * s_star / eps) * eta with eta the gamma-Cauchy
    noise; pure eps-DP provided beta <= eps / (2 * (gamma+1))."""
    if eps <= 0.0 or s_star < 0.0 or gamma <= 1.0:
        raise ValueError("invalid smooth Cauchy parameters")
    if s_star == 0.0:
        return value
    return value + (2.0 * (gamma + 1.0) * s_star / eps) * sample_cauchy(
        source, gamma
    )


def check_cauchy_beta(beta, eps, gamma):
    if beta > eps / (2.0 * (gamma + 1.0)):
        raise BudgetError(
            f"beta={beta:g} violates the Cauchy bound eps/(2(gamma+1))="
            f"{eps / (2.0 * (gamma + 1.0)):g}"
        )


def exponential_mechanism(utilities, delta_u, eps, source):
    """Sample an index with probability proportional to
    exp(eps * u / (2 * delta_u)), max-shifted for overflow safety."""
    utilities = np.asarray(utilities, dtype=np.float64)
    if utilities.size == 0:
        raise ValueError("empty utilities")
    if delta_u <= 0.0 or eps <= 0.0:
        raise ValueError("delta_u and eps must be > 0")
    scores = eps * utilities / (2.0 * delta_u)
    weights = np.exp(scores - scores.max())
    cumulative = np.cumsum(weights)
    u = source.uniform_open() * cumulative[-1]
    return int(np.searchsorted(cumulative, u))


def noisy_max_report(values, noise, direction="max"):
    """Extremal index after adding one independent noise draw per value;
    counts as a single budget access. noise is a zero-argument draw."""
    if len(values) == 0:
        raise ValueError("empty values")
    if direction not in ("max", "min"):
        raise ValueError("direction must be 'max' or 'min'")
    noised = [v + noise() for v in values]
    pick = max if direction == "max" else min
    return noised.index(pick(noised))
