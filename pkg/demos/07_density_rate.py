"""Haar histogram density estimation and its risk rate.

Run: python3 demos/07_density_rate.py
"""
import math

import numpy as np

from wbnn import corpus
from wbnn.density import InverseCDFSampler, estimate_density, risk_experiment

e = corpus.get("sinusoidal_density")
domain = (-math.pi, math.pi)
sample = InverseCDFSampler(e._formula, domain)(np.random.default_rng(0), 2000)
est = estimate_density(sample, domain, level=5)
print(f"{est.n_bins} bins, total mass {est.total_mass():.15f}")

table = risk_experiment(e._formula, domain, [2 ** k for k in range(8, 15)], reps=50, seed=0, s=0.5)
for n, J, m, r in table.rows():
    print(f"  N={n:6d} J={J} mean MISE {m:.4e} risk {r:.4f}")
lo, hi = table.slope_ci
print(f"risk slope {table.slope_fit:.3f} (95% CI {lo:.3f}..{hi:.3f}); s/(1+2s) at s=1/2 gives -0.25")
