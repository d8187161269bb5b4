"""
Do the L^p ratios grow with N?
==============================

A small version of the stability sweep: Gaussian signals at several sizes,
largest ||upper||_p / ||f||_p per size.  A bounded operator shows no trend.
The full-size run is ``varmult sweep``.
"""

from varmult.sweep import SweepConfig, rows_to_csv, run_sweep

cfg = SweepConfig.from_dict({
    "pairs": [[1.5, 2.0], [1.2, 1.5], [2.0, 3.0]],
    "expect_reject": [[2.0, 3.0]],
    "n_list": [16, 32, 64],
    "trials": 5,
})
rows = run_sweep(cfg)
for row in rows:
    if row[5] in ("upper_max", "lower_max", "growth_ratio", "rejected"):
        print(row[2:])

# The same rows as CSV, identical on every run with this config.
print(rows_to_csv(rows).splitlines()[0])
