"""A swarm of three networks with perturbed smoothness index.

Run: python3 demos/06_swarm.py
"""
import numpy as np

from wbnn import activation, corpus
from wbnn.learner import LearnConfig, swarm_learn

e = corpus.get("sinusoidal_density")
grid = corpus.sample(e, 1024)
for pct in (0, 90, 98):
    cfg = LearnConfig(corpus.register_besov(e), activation.compress(pct))
    reps = swarm_learn(grid, cfg, (-0.25, 0.0, 0.25), max_workers=3)
    sets = [r.kept_set() for r in reps]
    spread = max(np.abs(a.learned_grid.values - b.learned_grid.values).max() for a in reps for b in reps)
    print(f"{pct:3d}%: kept {[r.kept_count for r in reps]}, mise {[f'{r.mise:.2e}' for r in reps]}, "
          f"common core {len(sets[0] & sets[1] & sets[2])}, max member spread {spread:.2e}")
