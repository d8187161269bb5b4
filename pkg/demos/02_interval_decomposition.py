"""
Splitting a multiplier into interval indicators
===============================================

Greedy stopping times at thresholds 2^(-j/r) rho give step approximations;
consecutive differences are sums of at most 4 * 2^j disjoint interval
indicators with coefficients of size 2 * 2^(-j/r) rho.
"""

import numpy as np

from varmult import decompose, reconstruct, verify_lemma_bounds
from varmult.decomposition import greedy_step_approx

rng = np.random.default_rng(1)
m = np.cumsum(rng.standard_normal(64))

# One stopping-time approximation on its own.
stops, step = greedy_step_approx(m, 1.0)
print("stops at eps=1:", stops.tolist())
print("sup error:", np.abs(m - step.values).max())

# The full level decomposition and its bookkeeping.
d = decompose(m, r=1.5)  # default tol: 1e-6 * rho
print(f"rho = {d.rho:.3f}, {d.depth} levels")
for j, level in enumerate(d.levels[:6]):
    biggest = max((abs(p.coeff) for p in level), default=0.0)
    print(f"  level {j}: {len(level):3d} intervals, largest |b| = {biggest:.3f}")

rep = verify_lemma_bounds(d)
print("bounds hold:", rep.passed, "| shifted form:", rep.shifted_passed)
print("reconstruction error:", np.abs(reconstruct(d).values + d.residual - m).max())
