"""
The r-variation norm of a multiplier
====================================

A multiplier is a real sequence on the centered frequency grid.  Its
r-variation norm is its sup plus the largest l^r sum of jumps along any
increasing sample sequence.  Smaller r is the stronger norm.
"""

import numpy as np

from varmult import vr_norm, normalize_to_unit_ball
from varmult.variation import variation_path, variation_power

# An interior interval indicator jumps up once and down once, so for r = 2
# its norm is 1 + (1 + 1)^(1/2).
m = np.zeros(16)
m[5:11] = 1.0
print("indicator, r=2:", vr_norm(m, 2))

# A noisy ramp: the optimal sample sequence skips small wiggles when r > 1.
rng = np.random.default_rng(0)
ramp = np.linspace(0, 1, 32) + 0.05 * rng.standard_normal(32)
for r in (1.0, 1.5, 2.0):
    path = variation_path(ramp, r)
    print(f"r={r}: V^r power {variation_power(ramp, r):.4f} "
          f"using {len(path)} of {ramp.size} samples")

# Rescale onto the unit ball, which is where the maximal operator lives.
unit = normalize_to_unit_ball(ramp, 1.5)
print("normalised norm:", vr_norm(unit, 1.5))
