"""Single-layer learning pipeline: sample -> analyze -> activate -> synthesize."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import activation
from .activation import ShrinkageRule, compression_pct
from .besov import BesovParams, besov_seq_norm
from .exceptions import ParameterError, ShapeError
from .wavelet import CoefficientTree, FilterPair, SampleGrid, analyze, make_daubechies, synthesize

DEFAULT_SWARM_OFFSETS = (-0.25, 0.0, 0.25)


@dataclass(frozen=True)
class LearnConfig:
    besov: BesovParams
    rule: ShrinkageRule = field(default_factory=activation.identity)
    filter_order: int = 4
    j0: int = 0

    @property
    def filter(self) -> FilterPair:
        return make_daubechies(self.filter_order)

    @property
    def tau(self) -> float:
        return self.besov.tau

    def validate(self, grid_size: int | None = None):
        self.besov.check_valid_for(self.filter_order)
        if grid_size is not None and grid_size < 2 ** (self.j0 + 1):
            raise ShapeError(f"grid of {grid_size} samples is too small for j0={self.j0}")


@dataclass(frozen=True)
class LearnReport:
    target: SampleGrid
    learned_grid: SampleGrid
    analysed: CoefficientTree
    learned: CoefficientTree
    compression_pct: float
    mise: float
    sup_error: float
    error_profile: np.ndarray
    kept_count: int
    besov_norm_target: float
    besov_norm_learned: float

    @property
    def active_count(self) -> int:
        return self.analysed.active_count

    @property
    def zeroed_count(self) -> int:
        return self.active_count - self.kept_count

    def kept_set(self) -> frozenset:
        b = self.learned.flat_betas()
        lev, pos = self.learned.flat_levels(), self.learned.flat_positions()
        nz = np.flatnonzero(b)
        return frozenset(zip(lev[nz].astype(int).tolist(), pos[nz].astype(int).tolist()))

    def relative_mise(self, normalization: str = "mean_square") -> float:
        return relative_mise(self.mise, self.target, normalization)


def mise_profile(target: SampleGrid, learned: SampleGrid):
    """Rectangle-rule integrated squared error, sup error and |f - f_hat| per sample."""
    f = np.asarray(getattr(target, "values", target), dtype=float)
    g = np.asarray(getattr(learned, "values", learned), dtype=float)
    if f.shape != g.shape:
        raise ShapeError(f"length mismatch: {f.shape} vs {g.shape}")
    step = target.step if isinstance(target, SampleGrid) else 1.0 / len(f)
    err = f - g
    profile = np.abs(err)
    mise = float(step * np.dot(err, err))
    return mise, float(profile.max(initial=0.0)), profile


def relative_mise(mise: float, target: SampleGrid, normalization: str = "mean_square") -> float:
    """MISE divided by the target's mean square (default) or its energy."""
    v = target.values
    if normalization == "mean_square":
        denom = float(np.mean(v ** 2))
    elif normalization == "energy":
        denom = float(target.step * np.dot(v, v))
    elif normalization == "none":
        return mise
    else:
        raise ParameterError(f"unknown normalization {normalization!r}")
    return mise / denom if denom > 0 else math.inf


def learn(target: SampleGrid, config: LearnConfig, tree: CoefficientTree | None = None) -> LearnReport:
    """Run one single-layer network on ``target``.

    ``tree`` may pass a precomputed analysis of ``target`` to skip the
    forward transform.
    """
    config.validate(target.n_samples)
    filt = config.filter
    if tree is None:
        tree = analyze(target, filt, config.j0)
    learned = config.rule.apply(tree, config.tau)
    grid = synthesize(learned, filt)
    mise, sup_err, profile = mise_profile(target, grid)
    act = learned.flat_active()
    kept = int(np.count_nonzero(learned.flat_betas()[act]))
    return LearnReport(
        target=target,
        learned_grid=grid,
        analysed=tree,
        learned=learned,
        compression_pct=compression_pct(learned),
        mise=mise,
        sup_error=sup_err,
        error_profile=profile,
        kept_count=kept,
        besov_norm_target=besov_seq_norm(tree, config.besov),
        besov_norm_learned=besov_seq_norm(learned, config.besov),
    )


def compression_sweep(target: SampleGrid, config: LearnConfig, pct_list,
                      normalization: str = "mean_square"):
    """Learn at each compression percentage; rows are (pct, relative_mise, report)."""
    tree = analyze(target, config.filter, config.j0)
    rows = []
    for pct in pct_list:
        report = learn(target, replace(config, rule=activation.compress(pct)), tree)
        rows.append((float(pct), report.relative_mise(normalization), report))
    return rows


def benchmark_compression(target: SampleGrid, config: LearnConfig, mise_benchmark: float) -> float:
    """Highest compression (in %) whose threshold learning still has MISE <= benchmark.

    Coefficients are killed in increasing order of weight; since the basis is
    orthonormal the MISE after killing a set is its sum of squared betas.
    """
    tree = analyze(target, config.filter, config.j0)
    ranked = activation.rank(tree, config.tau)
    m = tree.active_count
    if m == 0:
        return 0.0
    # tie groups are killed together, matching threshold semantics
    w = ranked.weights[::-1]
    cum = np.cumsum(ranked.values[::-1] ** 2)
    best = 0
    for n_kill in range(1, len(w) + 1):
        if n_kill < len(w) and w[n_kill] == w[n_kill - 1]:
            continue
        if cum[n_kill - 1] <= mise_benchmark:
            best = n_kill
        else:
            break
    zero_active = m - len(ranked)
    return 100.0 * (best + zero_active) / m


def error_concentration(profile, singularities, radius: float, x=None) -> float:
    """Fraction of total squared error lying within ``radius`` of any singularity.

    ``profile`` is either a LearnReport / SampleGrid-aligned error array with
    ``x`` giving the sample positions.
    """
    if hasattr(profile, "error_profile"):
        x = profile.target.x
        profile = profile.error_profile
    profile = np.asarray(profile, dtype=float)
    if profile.size == 0:
        raise ValueError("empty error profile")
    if not radius > 0:
        raise ParameterError("radius must be positive")
    if x is None:
        x = np.linspace(0.0, 1.0, len(profile), endpoint=False)
    x = np.asarray(x, dtype=float)
    sq = profile ** 2
    total = sq.sum()
    if total == 0:
        return 1.0
    near = np.zeros(len(x), dtype=bool)
    for s in singularities:
        near |= np.abs(x - s) <= radius
    return float(sq[near].sum() / total)


def _member_rule(base: LearnConfig, tree: CoefficientTree) -> ShrinkageRule:
    # swarm members compete at equal kept count, not equal delta
    rule = base.rule
    if rule.kind in ("compress", "threshold"):
        if rule.kind == "compress":
            delta = activation.delta_for_compression(tree, base.tau, rule.param)
        else:
            delta = rule.param
        kept = activation.apply_threshold(tree, base.tau, delta)
        return activation.top_k(int(np.count_nonzero(kept.flat_betas())))
    return rule


def swarm_learn(target: SampleGrid, base: LearnConfig, s_offsets=DEFAULT_SWARM_OFFSETS,
                max_workers: int | None = None):
    """Learn with several networks whose smoothness index s is perturbed.

    Each member uses ``s + offset`` (so its tau shifts too) and keeps the
    same number of coefficients as the unperturbed rule would.  Members are
    independent; with ``max_workers`` they run on a thread pool and the
    result order follows ``s_offsets``.
    """
    members = []
    for i, off in enumerate(s_offsets):
        params = base.besov.with_s(base.besov.s + off)
        if not params.is_valid_for(base.filter_order):
            raise ParameterError(f"swarm member {i} (offset {off:+g}) leaves the validity window: {params}")
        members.append(params)
    tree = analyze(target, base.filter, base.j0)
    rule = _member_rule(base, tree)

    def run(params):
        return learn(target, replace(base, besov=params, rule=rule), tree)

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(run, members))
    return [run(p) for p in members]
