"""Shrinkage activation of the detail coefficients.

Every rule leaves the scaling coefficients alone, keeps the sign of each
detail coefficient and never increases its magnitude.  Threshold-type rules
may set coefficients to zero; the soft rule here never does.

Weights used for ranking are ``2**(j*(tau + 1/2)) * |beta_jk|`` where
``tau = s - 1/p`` is the Sobolev slope of the target's Besov class.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError
from .wavelet import CoefficientTree


@dataclass(frozen=True)
class RankedCoefficients:
    """Decreasing rearrangement of the nonzero detail coefficients."""

    weights: np.ndarray
    levels: np.ndarray
    positions: np.ndarray
    values: np.ndarray
    flat_index: np.ndarray
    total_count: int

    def __len__(self):
        return len(self.weights)

    def entries(self):
        return list(zip(self.weights.tolist(), self.levels.tolist(),
                        self.positions.tolist(), self.values.tolist()))

    def pairs(self):
        return [(int(j), int(k)) for j, k in zip(self.levels, self.positions)]


def coefficient_weights(tree: CoefficientTree, tau: float) -> np.ndarray:
    return 2.0 ** (tree.flat_levels() * (tau + 0.5)) * np.abs(tree.flat_betas())


def rank(tree: CoefficientTree, tau: float) -> RankedCoefficients:
    """Sort nonzero betas by normalized magnitude, largest first.

    Ties are broken by (j, k) in lexicographic order.
    """
    w = coefficient_weights(tree, tau)
    lev = tree.flat_levels()
    pos = tree.flat_positions()
    nz = np.flatnonzero(w > 0)
    # lexsort: last key is primary
    order = nz[np.lexsort((pos[nz], lev[nz], -w[nz]))]
    return RankedCoefficients(
        weights=w[order],
        levels=lev[order].astype(int),
        positions=pos[order].astype(int),
        values=tree.flat_betas()[order],
        flat_index=order,
        total_count=tree.active_count,
    )


def apply_threshold(tree: CoefficientTree, tau: float, delta: float) -> CoefficientTree:
    """Zero every beta whose weight lies in (0, delta); weights >= delta survive."""
    if not delta > 0:
        raise ParameterError(f"delta must be positive, got {delta}")
    w = coefficient_weights(tree, tau)
    flat = tree.flat_betas().copy()
    flat[(w > 0) & (w < delta)] = 0.0
    return tree.with_flat_betas(flat)


def apply_top_k(tree: CoefficientTree, tau: float, k: int) -> CoefficientTree:
    """Keep the first ``k`` entries of the decreasing rearrangement."""
    if k < 0:
        raise ParameterError(f"k must be nonnegative, got {k}")
    ranked = rank(tree, tau)
    flat = np.zeros(sum(len(b) for b in tree.betas))
    keep = ranked.flat_index[:k]
    flat[keep] = tree.flat_betas()[keep]
    return tree.with_flat_betas(flat)


def apply_soft(tree: CoefficientTree, tau: float, lam: float) -> CoefficientTree:
    """Non-threshold shrinkage beta * w / (w + lam); never kills a coefficient."""
    if lam < 0:
        raise ParameterError(f"lambda must be nonnegative, got {lam}")
    if lam == 0:
        return tree
    w = coefficient_weights(tree, tau)
    beta = tree.flat_betas()
    with np.errstate(invalid="ignore", divide="ignore"):
        factor = np.where(w > 0, w / (w + lam), 0.0)
    out = beta * factor
    # w/(w+lam) underflows to 0 for tiny w; keep the coefficient alive with the smallest step
    dead = (beta != 0) & (out == 0)
    out[dead] = np.copysign(np.nextafter(0.0, 1.0), beta[dead])
    return tree.with_flat_betas(out)


def delta_for_compression(tree: CoefficientTree, tau: float, target_pct: float) -> float:
    """Threshold that zeroes ceil(target_pct/100 * M) of the M ranked betas.

    The returned delta is the midpoint between the last kept and the first
    killed weight.  Equal weights straddling the cut cannot be separated; the
    whole tie group then survives.  An empty ranking returns 1.0.
    """
    if not 0 <= target_pct <= 100:
        raise ParameterError(f"target_pct must lie in [0, 100], got {target_pct}")
    w = rank(tree, tau).weights
    M = len(w)
    if M == 0:
        return 1.0
    n_kill = min(M, math.ceil(target_pct / 100.0 * M - 1e-9))
    if n_kill <= 0:
        return float(w[-1] / 2.0)
    if n_kill >= M:
        return float(w[0] * 2.0)
    hi, lo = w[M - n_kill - 1], w[M - n_kill]
    return float((hi + lo) / 2.0) if hi > lo else float(hi)


def compression_pct(tree: CoefficientTree) -> float:
    """Percentage of active betas that are zero."""
    act = tree.flat_active()
    m = int(act.sum())
    if m == 0:
        return 0.0
    kept = int(np.count_nonzero(tree.flat_betas()[act]))
    return 100.0 * (m - kept) / m


@dataclass(frozen=True)
class ShrinkageRule:
    """An activation rule.

    ``kind`` is one of ``identity``, ``threshold`` (param: delta), ``top_k``
    (param: k), ``soft`` (param: lambda) or ``compress`` (param: target
    percentage, resolved to a threshold per tree).
    """

    kind: str = "identity"
    param: float = 0.0

    KINDS = ("identity", "threshold", "top_k", "soft", "compress")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ParameterError(f"unknown rule kind {self.kind!r}")

    @property
    def is_threshold_type(self) -> bool:
        return self.kind in ("threshold", "top_k", "compress")

    def apply(self, tree: CoefficientTree, tau: float) -> CoefficientTree:
        if self.kind == "identity":
            return tree
        if self.kind == "threshold":
            return apply_threshold(tree, tau, self.param)
        if self.kind == "top_k":
            return apply_top_k(tree, tau, int(self.param))
        if self.kind == "soft":
            return apply_soft(tree, tau, self.param)
        return apply_threshold(tree, tau, delta_for_compression(tree, tau, self.param))

    def describe(self) -> str:
        return self.kind if self.kind == "identity" else f"{self.kind}={self.param:g}"


def identity() -> ShrinkageRule:
    return ShrinkageRule("identity")


def threshold(delta: float) -> ShrinkageRule:
    return ShrinkageRule("threshold", float(delta))


def top_k(k: int) -> ShrinkageRule:
    return ShrinkageRule("top_k", int(k))


def soft(lam: float) -> ShrinkageRule:
    return ShrinkageRule("soft", float(lam))


def compress(pct: float) -> ShrinkageRule:
    return ShrinkageRule("compress", float(pct))
