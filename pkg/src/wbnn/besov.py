"""Besov index bookkeeping and the wavelet-coefficient quasinorm (n = 1)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import EmbeddingError, ParameterError, RegionError

INF = math.inf


def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


@dataclass(frozen=True)
class BesovParams:
    """Index triple (p, q, s) of B^s_{pq}; ``math.inf`` is allowed for p and q."""

    p: float
    q: float
    s: float

    def __post_init__(self):
        if not self.p > 0 or not self.q > 0:
            raise ParameterError(f"Besov indices need p > 0 and q > 0, got p={self.p}, q={self.q}")

    @property
    def tau(self) -> float:
        """Sobolev slope s - 1/p."""
        return self.s - _inv(self.p)

    def is_valid_for(self, vanishing_moments: int) -> bool:
        return max(_inv(self.p) - 1.0, 0.0) < self.s < vanishing_moments

    def check_valid_for(self, vanishing_moments: int):
        if not self.is_valid_for(vanishing_moments):
            raise ParameterError(
                f"{self} violates (1/p - 1)_+ < s < {vanishing_moments} "
                f"for a filter with {vanishing_moments} vanishing moments")

    def with_s(self, s: float) -> "BesovParams":
        return BesovParams(self.p, self.q, s)


def _lp(x: np.ndarray, p: float) -> float:
    x = np.abs(x)
    if x.size == 0:
        return 0.0
    if math.isinf(p):
        return float(x.max())
    return float(np.sum(x ** p) ** (1.0 / p))


def level_weights(levels, params: BesovParams) -> np.ndarray:
    """2**(j (s + 1/2 - 1/p)) for each level j."""
    levels = np.asarray(levels, dtype=float)
    return 2.0 ** (levels * (params.s + 0.5 - _inv(params.p)))


def besov_seq_norm(tree, params: BesovParams) -> float:
    """Besov (quasi)norm of a coefficient tree.

    ``{ ||alpha||_p^q + sum_j [2^{j(s+1/2-1/p)} ||beta_j||_p]^q }^{1/q}``,
    with the usual supremum forms for ``p = inf`` or ``q = inf``.
    """
    p, q = params.p, params.q
    if not p > 0 or not q > 0:
        raise ParameterError("p and q must be positive")
    w = level_weights(list(tree.levels), params)
    blocks = [_lp(tree.alphas, p)] + [wj * _lp(b, p) for wj, b in zip(w, tree.betas)]
    blocks = np.array(blocks)
    if math.isinf(q):
        return float(blocks.max())
    return float(np.sum(blocks ** q) ** (1.0 / q))


def sobolev_line(params: BesovParams, rho: float, eta: float) -> BesovParams:
    """Target space (rho, eta, sigma) on the same Sobolev line, sigma = tau + 1/rho."""
    if rho < params.p or eta < params.q:
        raise EmbeddingError(
            f"embedding needs rho >= p and eta >= q; got rho={rho}, p={params.p}, eta={eta}, q={params.q}")
    return BesovParams(rho, eta, params.tau + _inv(rho))


def hilbert_target(params: BesovParams, vanishing_moments: int) -> BesovParams:
    """Map (p, q, s) to the Hilbert space B^sigma_{22} on its Sobolev line.

    Admissible region: 1/(r + 1/2) < p <= 2, 0 < q <= 2, 1/p - 1/2 <= s < r.
    """
    p, q, s, r = params.p, params.q, params.s, vanishing_moments
    if not p > 1.0 / (r + 0.5):
        raise RegionError(f"p={p} violates 1/(r+1/2) < p")
    if not p <= 2:
        raise RegionError(f"p={p} violates p <= 2")
    if not q <= 2:
        raise RegionError(f"q={q} violates q <= 2")
    if not s >= _inv(p) - 0.5:
        raise RegionError(f"s={s} violates 1/p - 1/2 <= s")
    if not s < r:
        raise RegionError(f"s={s} violates s < r={r}")
    return BesovParams(2.0, 2.0, params.tau + 0.5)
