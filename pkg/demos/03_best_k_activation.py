"""Decreasing rearrangement: top-k against brute force on a small tree.

Run: python3 demos/03_best_k_activation.py
"""
from itertools import combinations

import numpy as np

from wbnn import activation
from wbnn.besov import BesovParams, besov_seq_norm
from wbnn.wavelet import CoefficientTree

rng = np.random.default_rng(0)
tree = CoefficientTree(0, [1.0], [rng.standard_normal(1), rng.standard_normal(2), rng.standard_normal(4)])
tau = 0.5
hilbert = BesovParams(2, 2, tau + 0.5)

ranked = activation.rank(tree, tau)
for w, j, k, b in ranked.entries():
    print(f"  weight {w:7.4f}  (j={j}, k={k})  beta {b:+.4f}")


def residual(kept):
    flat = tree.flat_betas().copy()
    flat[list(kept)] = 0
    return besov_seq_norm(tree.with_flat_betas(flat).replace(alphas=[0.0]), hilbert)


for k in range(len(ranked) + 1):
    top = np.flatnonzero(activation.apply_top_k(tree, tau, k).flat_betas())
    brute = min(residual(c) for c in combinations(range(7), k))
    print(f"k={k}: top-k residual {residual(top):.6f}, best of all subsets {brute:.6f}")

# The soft rule shrinks without killing; the threshold rule kills.
print("soft:", np.round(activation.apply_soft(tree, tau, 0.5).flat_betas(), 4))
print("threshold 1.0:", np.round(activation.apply_threshold(tree, tau, 1.0).flat_betas(), 4))
