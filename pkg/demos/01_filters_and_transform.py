"""Daubechies filters, the scaling function and the periodic transform.

Run: python3 demos/01_filters_and_transform.py
"""
import numpy as np

from wbnn.wavelet import SampleGrid, analyze, evaluate_scaling, make_daubechies, synthesize, transform_matrix

# The filter bank for 2 vanishing moments; sums to sqrt(2), orthogonal to its even shifts.
db2 = make_daubechies(2)
print("DB2 low-pass:", np.round(db2.low_pass, 5))
print("sum:", db2.low_pass.sum(), " shift-2 product:", np.dot(db2.low_pass[:2], db2.low_pass[2:]))

# phi for DB4 by the cascade algorithm; its integer translates add up to one.
db4 = make_daubechies(4)
x = np.linspace(0, 7, 8)
print("DB4 phi at integers:", np.round(evaluate_scaling(db4, x), 6))

# The dense transform of a 16-sample grid is an orthogonal matrix.
Q = transform_matrix(16, db4)
print("max |Q^T Q - I| =", np.abs(Q.T @ Q - np.eye(16)).max())

# Analyze a bump that sits well inside its grid and rebuild it.
xs = np.arange(512) / 512
bump = np.where((xs > 0.25) & (xs < 0.75), np.sin(4 * np.pi * (xs - 0.25)) ** 2, 0.0)
grid = SampleGrid((0.0, 1.0), bump)
tree = analyze(grid, db4)
print(f"levels {tree.j0}..{tree.J}, active betas per level: {tree.level_counts}")
back = synthesize(tree, db4)
print("reconstruction error:", np.abs(back.values - bump).max())
