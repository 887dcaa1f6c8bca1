import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wbnn.density import (InverseCDFSampler, balanced_level, default_level, density_mise, estimate_density,
                          risk_experiment)
from wbnn.exceptions import ParameterError, SamplerError


def uniform01(x):
    x = np.asarray(x, dtype=float)
    return np.where((x >= 0) & (x <= 1), 1.0, 0.0)


def test_single_point():
    est = estimate_density([0.3], (0, 1), level=3)
    expect = np.zeros(8)
    expect[2] = 2 ** 1.5
    np.testing.assert_allclose(est.alphas, expect, rtol=1e-15)


def test_default_level():
    assert estimate_density(np.linspace(0, 1, 100), (0, 1)).J == 6
    assert default_level(1024) == 10
    assert balanced_level(1024, 0.5) == 5 and balanced_level(256, 0.5) == 4


@pytest.mark.parametrize("seed", range(5))
def test_histogram_oracle(seed):
    rng = np.random.default_rng(seed)
    domain = (-2.0, 3.0)
    x = rng.uniform(*domain, size=int(rng.integers(1, 500)))
    for J in (0, 2, 5):
        est = estimate_density(x, domain, J)
        dens, edges = np.histogram(x, bins=2 ** J, range=domain, density=True)
        np.testing.assert_allclose(est.heights, dens, rtol=1e-13, atol=1e-13)
        np.testing.assert_allclose(est.edges, edges)
        assert abs(est.total_mass() - 1.0) < 1e-12
        mid = 0.5 * (edges[1:] + edges[:-1])
        np.testing.assert_allclose(est(mid), dens, rtol=1e-13)


def test_outside_points_rejected():
    est = estimate_density([0.5, 2.0, -1.0, 0.25], (0, 1), 1)
    assert est.n_used == 2 and est.n_rejected == 2
    assert est.total_mass() == pytest.approx(0.5)


def test_errors():
    with pytest.raises(ValueError):
        estimate_density([], (0, 1))
    with pytest.raises(ParameterError):
        estimate_density([0.5], (1, 0))
    with pytest.raises(SamplerError):
        InverseCDFSampler(lambda x: np.zeros_like(x), (0, 1))
    with pytest.raises(SamplerError):
        InverseCDFSampler(lambda x: -np.ones_like(x), (0, 1))
    with pytest.raises(ParameterError):
        risk_experiment(uniform01, (0, 1), [8, 16], reps=1)


def test_density_mise_exact_and_offset():
    est = estimate_density(np.linspace(0, 1, 64, endpoint=False) + 1 / 128, (0, 1), 3)
    assert density_mise(uniform01, est) == pytest.approx(0.0, abs=1e-24)
    assert density_mise(lambda x: uniform01(x) + 0.2, est) == pytest.approx(0.04, rel=1e-12)


def test_density_mise_naive_loop():
    rng = np.random.default_rng(3)
    est = estimate_density(rng.beta(2, 3, 200), (0, 1), 4)

    def f(x):
        return 12 * x * (1 - x) ** 2

    n = 512
    naive = 0.0
    for i in range(n):
        x = (i + 0.5) / n
        naive += (f(x) - float(est(x))) ** 2 / n
    assert abs(density_mise(f, est, n) - naive) < 1e-14 * max(1, naive) * 10


def test_sampler_moments():
    s = InverseCDFSampler(lambda x: 2 * x, (0, 1))
    x = s(np.random.default_rng(0), 200_000)
    assert x.mean() == pytest.approx(2 / 3, abs=3e-3)
    assert 0 <= x.min() and x.max() <= 1


def test_uniform_slope_near_minus_one():
    t = risk_experiment(uniform01, (0, 1), [2 ** k for k in range(6, 12)], reps=200, seed=1, level=3)
    assert t.mise_slope == pytest.approx(-1.0, abs=0.1)


def test_mise_decreases_with_n():
    t = risk_experiment(lambda x: 2 * x * (x >= 0) * (x <= 1), (0, 1), [2 ** k for k in range(6, 13, 2)],
                        reps=40, seed=2, s=1.0)
    assert np.all(np.diff(t.mean_mise) < 0)


def test_seeded_determinism():
    args = (uniform01, (0, 1), [32, 64, 128])
    a = risk_experiment(*args, reps=5, seed=9)
    b = risk_experiment(*args, reps=5, seed=9)
    c = risk_experiment(*args, reps=5, seed=10)
    np.testing.assert_array_equal(a.mean_mise, b.mean_mise)
    assert not np.array_equal(a.mean_mise, c.mean_mise)
    assert a.rows() == b.rows()


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=1, max_size=300), st.integers(0, 8))
def test_mass_and_nonnegativity(xs, J):
    est = estimate_density(xs, (0, 1), J)
    assert np.all(est.alphas >= 0)
    assert abs(est.total_mass() - 1.0) < 1e-12
    counts = np.histogram(xs, bins=2 ** J, range=(0, 1))[0]
    np.testing.assert_allclose(est.heights, counts / len(xs) * 2 ** J, rtol=1e-13)
