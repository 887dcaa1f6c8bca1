"""Besov sequence norms and the Sobolev embedding line.

Run: python3 demos/02_besov_norms.py
"""
from wbnn import corpus
from wbnn.besov import INF, BesovParams, besov_seq_norm, hilbert_target, sobolev_line
from wbnn.wavelet import analyze, make_daubechies

e = corpus.get("lambda_tear")
tree = analyze(corpus.sample(e, 1024), make_daubechies(4))

# Registered class of the lambda-tear at p = 2, and two spaces on its Sobolev line.
params = corpus.register_besov(e, 2.0)
print("registered:", params, "tau =", params.tau)
for rho, eta in [(2, INF), (4, INF), (INF, INF)]:
    q = sobolev_line(params, rho, eta)
    print(f"  ({rho}, {eta}, {q.s:.3f}) norm {besov_seq_norm(tree, q):.6f}")
print("the norm can only drop along the line: source norm", round(besov_seq_norm(tree, params), 6))

# The Hilbert space reached from (1, 2, 0.75).
print("hilbert target of (1, 2, 0.75):", hilbert_target(BesovParams(1, 2, 0.75), 4))
