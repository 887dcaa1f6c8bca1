"""Haar empirical density estimation and the Monte Carlo risk-rate study.

The estimator keeps only the scaling coefficients at one level J,
``alpha_Jk = mean(phi_Jk(X_i))``, which is exactly a histogram with ``2**J``
equal bins over the domain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .exceptions import ParameterError, SamplerError

SAMPLER_NODES = 2 ** 16


@dataclass(frozen=True)
class EmpiricalDensity:
    J: int
    alphas: np.ndarray
    domain: tuple
    n_used: int
    n_rejected: int = 0

    @property
    def n_bins(self) -> int:
        return len(self.alphas)

    @property
    def length(self) -> float:
        return self.domain[1] - self.domain[0]

    @property
    def bin_width(self) -> float:
        return self.length / self.n_bins

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(self.domain[0], self.domain[1], self.n_bins + 1)

    @property
    def heights(self) -> np.ndarray:
        """Piecewise-constant density value on each bin."""
        return self.alphas / math.sqrt(self.bin_width)

    def total_mass(self) -> float:
        return float(np.sum(self.heights) * self.bin_width)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        idx = _bin_index(x, self.domain, self.n_bins)
        inside = (x >= self.domain[0]) & (x <= self.domain[1])
        out = np.where(inside, self.heights[np.clip(idx, 0, self.n_bins - 1)], 0.0)
        return out if out.ndim else float(out)


def default_level(n: int) -> int:
    """J(N) = floor(log2 N)."""
    return int(math.floor(math.log2(n)))


def balanced_level(n: int, s: float) -> int:
    """Level whose bin width ~ N**(-1/(1+2s)) balances squared bias and variance."""
    return max(0, int(math.floor(math.log2(n) / (1 + 2 * s) + 0.5)))


def _bin_index(x, domain, n_bins):
    lo, hi = domain
    idx = np.floor((x - lo) / (hi - lo) * n_bins).astype(int)
    # the right endpoint belongs to the last bin
    return np.where(x == hi, n_bins - 1, idx)


def estimate_density(sample, domain, level: int | None = None) -> EmpiricalDensity:
    """Empirical Haar coefficients at level ``level`` (default floor(log2 N)).

    Points outside ``domain`` are dropped and counted in ``n_rejected``; the
    normalisation still divides by the full sample size.
    """
    x = np.asarray(sample, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("empty sample")
    lo, hi = map(float, domain)
    if not hi > lo:
        raise ParameterError(f"empty domain {domain}")
    J = default_level(x.size) if level is None else int(level)
    if J < 0:
        raise ParameterError("level must be >= 0")
    n_bins = 2 ** J
    inside = (x >= lo) & (x <= hi)
    counts = np.bincount(_bin_index(x[inside], (lo, hi), n_bins), minlength=n_bins)
    phi_height = math.sqrt(n_bins / (hi - lo))
    alphas = counts / x.size * phi_height
    return EmpiricalDensity(J, alphas, (lo, hi), int(inside.sum()), int((~inside).sum()))


def density_mise(f_true, estimate: EmpiricalDensity, grid_size: int = 2 ** 14) -> float:
    """Rectangle-rule integrated squared error over the estimate's domain (midpoint nodes)."""
    lo, hi = estimate.domain
    h = (hi - lo) / grid_size
    x = lo + h * (np.arange(grid_size) + 0.5)
    err = np.asarray(f_true(x), dtype=float) - estimate(x)
    return float(h * np.dot(err, err))


class InverseCDFSampler:
    """Draw from a density on a bounded interval by numerical CDF inversion."""

    def __init__(self, pdf, domain, nodes: int = SAMPLER_NODES):
        lo, hi = domain
        x = np.linspace(lo, hi, nodes + 1)
        f = np.asarray(pdf(x), dtype=float)
        if not np.all(np.isfinite(f)) or np.any(f < 0):
            raise SamplerError("density must be finite and nonnegative on the sampling domain")
        cdf = np.concatenate([[0.0], np.cumsum((f[1:] + f[:-1]) / 2 * np.diff(x))])
        if not cdf[-1] > 0:
            raise SamplerError("density has zero mass on the sampling domain")
        self.x = x
        self.cdf = cdf / cdf[-1]

    def __call__(self, rng: np.random.Generator, n: int) -> np.ndarray:
        u = rng.random(n)
        # np.interp needs strictly increasing xp; flat CDF stretches carry no mass
        keep = np.concatenate([[True], np.diff(self.cdf) > 0])
        return np.interp(u, self.cdf[keep], self.x[keep])


@dataclass(frozen=True)
class RiskTable:
    n: np.ndarray
    level: np.ndarray
    mean_mise: np.ndarray
    risk: np.ndarray
    mise_slope: float
    slope_fit: float
    slope_stderr: float
    slope_ci: tuple

    def rows(self):
        return list(zip(self.n.tolist(), self.level.tolist(), self.mean_mise.tolist(), self.risk.tolist()))


def risk_experiment(f_true, domain, n_list, reps: int = 50, seed: int = 0, s: float | None = None,
                    level=None, grid_size: int = 2 ** 14, support=None) -> RiskTable:
    """Monte Carlo estimate of the risk of the Haar density estimator versus N.

    ``level`` picks J(N): ``None`` uses the bias/variance balanced level for
    smoothness ``s`` (or floor(log2 N) when ``s`` is None), an int fixes J,
    and a callable maps N to J.  The risk is the root of the mean MISE;
    ``slope_fit`` is its log-log slope against N and ``mise_slope`` the slope
    of the mean MISE itself.

    Replication ``r`` at size ``N`` draws from its own child of
    ``SeedSequence(seed)``, so results do not depend on execution order.
    """
    if reps < 2:
        raise ParameterError("reps must be >= 2")
    if s is not None and not 0 < s < 2:
        raise ParameterError(f"smoothness must lie in (0, 2), got {s}")
    if level is None:
        level_of = (lambda n: balanced_level(n, s)) if s is not None else default_level
    elif callable(level):
        level_of = level
    else:
        level_of = lambda n: int(level)  # noqa: E731
    sampler = InverseCDFSampler(f_true, support if support is not None else domain)
    children = np.random.SeedSequence(seed).spawn(len(n_list))

    n_arr = np.asarray(n_list, dtype=int)
    levels, means = [], []
    for n, child in zip(n_arr, children):
        J = level_of(int(n))
        mises = []
        for rep_seq in child.spawn(reps):
            rng = np.random.default_rng(rep_seq)
            est = estimate_density(sampler(rng, int(n)), domain, J)
            mises.append(density_mise(f_true, est, grid_size))
        levels.append(J)
        means.append(float(np.mean(mises)))
    means = np.asarray(means)
    risk = np.sqrt(means)
    logn = np.log(n_arr)
    fit = stats.linregress(logn, np.log(risk))
    mise_fit = stats.linregress(logn, np.log(means))
    t = stats.t.ppf(0.975, len(n_arr) - 2) if len(n_arr) > 2 else math.nan
    return RiskTable(n_arr, np.asarray(levels), means, risk, float(mise_fit.slope), float(fit.slope),
                     float(fit.stderr), (float(fit.slope - t * fit.stderr), float(fit.slope + t * fit.stderr)))
