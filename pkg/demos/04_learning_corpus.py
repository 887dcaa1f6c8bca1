"""Learn the four corpus targets at a few compression rates and save plots.

Run: python3 demos/04_learning_corpus.py [out_dir]
"""
import sys
from dataclasses import replace
from pathlib import Path

from wbnn import activation, corpus
from wbnn.learner import LearnConfig, compression_sweep, learn
from wbnn.svg import line_plot
from wbnn.wavelet import make_daubechies, no_wrap_j0

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

for name in corpus.IDS:
    e = corpus.get(name)
    grid = corpus.sample(e, 1024)
    cfg = LearnConfig(corpus.register_besov(e), j0=no_wrap_j0(grid, make_daubechies(4)))
    rows = compression_sweep(grid, cfg, [50, 85, 98, 99])
    print(name, " ".join(f"{pct:.0f}%:{rel:.2e}" for pct, rel, _ in rows))
    rep = learn(grid, replace(cfg, rule=activation.compress(98)))
    svg = line_plot(grid.x, [("target", grid.values, "black", True),
                             ("learned", rep.learned_grid.values, "red", False),
                             ("error", rep.error_profile, "blue", False)],
                    title=f"{name} at {rep.compression_pct:.2f}% compression")
    (out / f"{name}_98.svg").write_text(svg)
print("plots written to", out)
