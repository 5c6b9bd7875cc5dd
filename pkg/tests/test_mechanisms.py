"""Noise primitives, DP mechanisms and budget accounting."""

import math

import numpy as np
import pytest
from scipy import stats

from dpgrl.mechanisms import (
    BudgetError,
    MechanismKind,
    NoiseSource,
    check_cauchy_beta,
    exponential_mechanism,
    make_budget,
    mech_cauchy_smooth,
    mech_gaussian_global,
    mech_laplace_global,
    mech_laplace_smooth,
    noisy_max_report,
    sample_cauchy,
    sample_gaussian,
    sample_laplace,
)


def test_noise_source_determinism():
    a = NoiseSource(42)
    b = NoiseSource(42)
    assert [a.uniform_open() for _ in range(50)] == [
        b.uniform_open() for _ in range(50)
    ]
    assert all(0.0 < NoiseSource(3).uniform_open() < 1.0 for _ in range(100))


def test_laplace_ks():
    source = NoiseSource(0)
    draws = np.array([sample_laplace(source, 2.5) for _ in range(100_000)])
    d, _ = stats.kstest(draws, stats.laplace(scale=2.5).cdf)
    assert d < 0.01


def test_gaussian_ks():
    source = NoiseSource(1)
    draws = np.array([sample_gaussian(source, 1.7) for _ in range(100_000)])
    d, _ = stats.kstest(draws, stats.norm(scale=1.7).cdf)
    assert d < 0.01


def test_cauchy_gamma2_matches_standard_cauchy():
    source = NoiseSource(2)
    draws = np.array([sample_cauchy(source, 2.0) for _ in range(100_000)])
    d, _ = stats.kstest(draws, stats.cauchy().cdf)
    assert d < 0.01
    assert abs(np.median(draws)) < 0.02


def test_cauchy_general_gamma_median_and_symmetry():
    for gamma in (1.5, 3.0, 4.0):
        source = NoiseSource(int(gamma * 10))
        draws = np.array([sample_cauchy(source, gamma) for _ in range(40_000)])
        assert abs(np.median(draws)) < 0.02
        # symmetric density: sign balance within binomial noise
        assert abs(np.mean(draws > 0) - 0.5) < 0.01


def test_sampler_validation():
    source = NoiseSource(0)
    with pytest.raises(ValueError):
        sample_laplace(source, 0.0)
    with pytest.raises(ValueError):
        sample_gaussian(source, -1.0)
    with pytest.raises(ValueError):
        sample_cauchy(source, 1.0)


def test_additive_mechanisms_center_on_value():
    source = NoiseSource(5)
    lap = [mech_laplace_global(10.0, 1.0, 2.0, source) for _ in range(20_000)]
    assert np.median(lap) == pytest.approx(10.0, abs=0.05)
    gau = [
        mech_gaussian_global(4.0, 0.5, 0.5, 1e-6, source) for _ in range(20_000)
    ]
    assert np.mean(gau) == pytest.approx(4.0, abs=0.1)
    smo = [mech_laplace_smooth(1.0, 0.2, 1.0, source) for _ in range(20_000)]
    assert np.median(smo) == pytest.approx(1.0, abs=0.02)
    cau = [mech_cauchy_smooth(2.0, 0.2, 5.0, 2.0, source) for _ in range(20_000)]
    assert np.median(cau) == pytest.approx(2.0, abs=0.02)


def test_smooth_mechanisms_zero_sensitivity_passthrough():
    source = NoiseSource(0)
    assert mech_laplace_smooth(3.0, 0.0, 1.0, source) == 3.0
    assert mech_cauchy_smooth(3.0, 0.0, 1.0, 2.0, source) == 3.0


def test_exponential_mechanism_tv_distance():
    utilities = np.array([0.0, -0.1, -0.2, -0.3, -0.5])
    delta_u, eps = 0.5, 1.0
    scores = eps * utilities / (2.0 * delta_u)
    analytic = np.exp(scores - scores.max())
    analytic /= analytic.sum()
    source = NoiseSource(7)
    counts = np.zeros(len(utilities))
    n_draws = 100_000
    for _ in range(n_draws):
        counts[exponential_mechanism(utilities, delta_u, eps, source)] += 1
    tv = 0.5 * np.abs(counts / n_draws - analytic).sum()
    assert tv < 0.02


def test_exponential_mechanism_limit():
    # one clearly best utility at large eps is picked essentially always
    utilities = np.array([-0.5, 0.0, -0.5, -0.5])
    source = NoiseSource(8)
    picks = [
        exponential_mechanism(utilities, 0.5, 200.0, source) for _ in range(200)
    ]
    assert all(p == 1 for p in picks)


def test_exponential_mechanism_validation():
    source = NoiseSource(0)
    with pytest.raises(ValueError):
        exponential_mechanism([], 0.5, 1.0, source)
    with pytest.raises(ValueError):
        exponential_mechanism([1.0], 0.0, 1.0, source)


def test_noisy_max_report():
    source = NoiseSource(9)
    noise = lambda: sample_laplace(source, 1e-9)
    assert noisy_max_report([1.0, 5.0, 3.0], noise, "max") == 1
    assert noisy_max_report([1.0, 5.0, 3.0], noise, "min") == 0
    with pytest.raises(ValueError):
        noisy_max_report([], noise)
    with pytest.raises(ValueError):
        noisy_max_report([1.0], noise, "median")


def test_make_budget_pinned_values():
    budget = make_budget(1.0, 1e-6, 5, release_counts=True)
    assert budget.epsilon_node == pytest.approx(1.0 / 14.0)
    assert budget.delta_node == pytest.approx(2.5e-7)
    assert budget.beta == pytest.approx(
        (1.0 / 14.0) / (2.0 * math.log(2.0 / 2.5e-7))
    )
    lean = make_budget(1.0, 1e-6, 5, release_counts=False)
    assert lean.epsilon_node == pytest.approx(1.0 / 9.0)


def test_make_budget_validation():
    with pytest.raises(BudgetError):
        make_budget(0.0, 1e-6, 5, True)
    with pytest.raises(BudgetError):
        make_budget(1.0, 0.0, 5, True)
    with pytest.raises(BudgetError):
        make_budget(1.0, 1.5, 5, True)
    with pytest.raises(BudgetError):
        make_budget(1.0, 1e-6, 1, True)


def test_check_cauchy_beta():
    check_cauchy_beta(0.01, 1.0, 2.0)
    with pytest.raises(BudgetError):
        check_cauchy_beta(0.5, 1.0, 2.0)


def test_mechanism_kind_cli_values():
    assert {k.value for k in MechanismKind} == {
        "gl-laplace",
        "gl-gaussian",
        "sm-laplace",
        "sm-cauchy",
        "exponential",
        "noisy-counts",
        "none",
    }
