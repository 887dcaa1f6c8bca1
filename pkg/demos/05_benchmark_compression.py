"""How far can each target be compressed before it loses the lambda-tear's 99% quality?

Run: python3 demos/05_benchmark_compression.py
"""
from dataclasses import replace

from wbnn import activation, corpus
from wbnn.learner import LearnConfig, benchmark_compression, error_concentration, learn
from wbnn.wavelet import make_daubechies, no_wrap_j0


def config(name):
    e = corpus.get(name)
    g = corpus.sample(e, 1024)
    return e, g, LearnConfig(corpus.register_besov(e), j0=no_wrap_j0(g, make_daubechies(4)))


_, g, cfg = config("lambda_tear")
bench = learn(g, replace(cfg, rule=activation.compress(99))).mise
print(f"benchmark MISE (lambda-tear at 99%): {bench:.3e}")
for name in corpus.IDS:
    e, g, cfg = config(name)
    pct = benchmark_compression(g, cfg, bench)
    rep = learn(g, replace(cfg, rule=activation.compress(98)))
    near = error_concentration(rep, e.singular_points, 0.05)
    print(f"  {name:20s} reaches the benchmark at {pct:6.2f}%; "
          f"at 98% {near:.1%} of the error lies within 0.05 of a singular point")
