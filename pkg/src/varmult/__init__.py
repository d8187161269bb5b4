"""Maximal Fourier multipliers of bounded r-variation on finite grids."""
from .errors import HypothesisError, InvariantError, SizeMismatchError
from .grid import (ExponentConfig, FreqInterval, GridFunction,
                   IntervalCollection, Spectrum, apply_multiplier, dft,
                   frequencies, inverse_dft, lp_norm, partial_sum)
from .variation import (Multiplier, normalize_to_unit_ball, variation_power,
                        vr_norm)
from .decomposition import (Decomposition, decompose, greedy_step_approx,
                        reconstruct, verify_lemma_bounds)
from .squarefun import (chain_constant, square_function, var_carleson,
                        verify_chain)
from .maximal import (BoundReport, LowerBudget, bound_report,
                      empirical_operator_norm, maximal_lower, maximal_upper)

__version__ = "0.1.0"
