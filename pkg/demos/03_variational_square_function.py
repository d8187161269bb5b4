"""
The variational square function
===============================

For each point x take the best collection of disjoint frequency intervals
and add up |partial sum over I|^s.  A dynamic program over interval cuts
finds the sup at every point at once, together with an attaining collection.
"""

import numpy as np

from varmult import apply_multiplier, chain_constant, var_carleson
from varmult.maximal import random_signal, single_mode
from varmult.variation import normalize_to_unit_ball

# A single Fourier mode: every point sees the amplitude and nothing more.
f = single_mode(32, 3, amplitude=2.0)
print("single mode:", np.unique(np.round(var_carleson(f, 2.5).values, 12)))

# A random signal: print a few points with their witnessing collections.
f = random_signal(32, seed=0)
field = var_carleson(f, s=2.5)
for x in (0, 7, 19):
    print(f"x={x:2d}  value {field.values[x]:.4f}  witness {field.witness[x]}")

# Larger s gives smaller values.
for s in (2.0, 2.5, 4.0):
    print(f"s={s}: mean {var_carleson(f, s, witness=False).values.mean():.4f}")

# The pointwise chain: any unit-ball multiplier is dominated by the constant
# times the square function.
r, s = 1.5, 2.5
m = normalize_to_unit_ball(np.cumsum(np.random.default_rng(2).standard_normal(32)), r)
lhs = np.abs(apply_multiplier(f, m).values)
rhs = chain_constant(r, s) * var_carleson(f, s, witness=False).values
print(f"chain constant {chain_constant(r, s):.2f}, worst ratio {np.max(lhs / rhs):.4f}")
