"""r-variation norms of sequences on the frequency grid.

The r-variation power of a sequence ``m`` is the largest value of
``sum_t |m[i_t] - m[i_{t-1}]|^r`` over increasing index subsequences.  It is
computed exactly by an O(N^2) dynamic program; :func:`variation_power_bruteforce`
enumerates all subsequences and is kept as an independent check.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "Multiplier", "variation_power", "variation_path", "vr_norm",
    "vr_norm_batch", "normalize_to_unit_ball", "variation_power_bruteforce",
]


@dataclass(frozen=True, eq=False)
class Multiplier:
    """Real multiplier sampled on the centered frequency grid."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("multiplier values must be a non-empty 1-d array")
        if not np.all(np.isfinite(arr)):
            raise ValueError("multiplier contains non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def size(self):
        return self.values.size

    def __len__(self):
        return self.values.size

    def __mul__(self, other):
        return Multiplier(self.values * other)

    __rmul__ = __mul__


def _as_values(m):
    if isinstance(m, Multiplier):
        return m.values
    return Multiplier(m).values


def _check_r(r):
    if not r >= 1:
        raise ValueError(f"variation exponent must be >= 1, got {r}")


def _compress(v):
    # consecutive equal entries never add variation; keep one of each run
    keep = np.ones(v.size, dtype=bool)
    keep[1:] = v[1:] != v[:-1]
    idx = np.flatnonzero(keep)
    return v[idx], idx


def _dp(v, r):
    n = v.size
    best = np.zeros(n)
    pred = np.full(n, -1)
    for i in range(1, n):
        cand = best[:i] + np.abs(v[i] - v[:i]) ** r
        j = int(np.argmax(cand))  # first maximiser: smallest j
        best[i] = cand[j]
        pred[i] = j
    return best, pred


def variation_power(m, r) -> float:
    """Sup over increasing subsequences of ``sum |m[i_t] - m[i_{t-1}]|^r``."""
    _check_r(r)
    v, _ = _compress(_as_values(m))
    if v.size < 2:
        return 0.0
    best, _ = _dp(v, r)
    return float(best.max())


def variation_path(m, r):
    """Indices of a subsequence attaining :func:`variation_power`.

    Ties are broken towards the smallest predecessor index.
    """
    _check_r(r)
    v, idx = _compress(_as_values(m))
    if v.size < 2:
        return [0]
    best, pred = _dp(v, r)
    i = int(np.argmax(best))
    path = []
    while i >= 0:
        path.append(int(idx[i]))
        i = int(pred[i])
    return path[::-1]


def vr_norm(m, r) -> float:
    """``max |m| + variation_power(m, r)^(1/r)``."""
    v = _as_values(m)
    return float(np.abs(v).max()) + variation_power(v, r) ** (1.0 / r)


def vr_norm_batch(ms, r):
    """:func:`vr_norm` of every row of a 2-d array, vectorised over rows."""
    _check_r(r)
    ms = np.asarray(ms, dtype=float)
    b, n = ms.shape
    best = np.zeros((b, n))
    for i in range(1, n):
        best[:, i] = (best[:, :i] + np.abs(ms[:, i:i + 1] - ms[:, :i]) ** r).max(axis=1)
    return np.abs(ms).max(axis=1) + best.max(axis=1) ** (1.0 / r)


def normalize_to_unit_ball(m, r) -> Multiplier:
    """Rescale ``m`` to V^r norm one."""
    v = _as_values(m)
    if not np.any(v):
        raise ValueError("cannot normalise the zero multiplier")
    return Multiplier(v / vr_norm(v, r))


@lru_cache(maxsize=None)
def _consecutive_pairs(n):
    # rows: all nonempty subsets of range(n); columns: pairs (j, i), j < i;
    # entry 1 when j and i are consecutive members of the subset
    pairs = list(itertools.combinations(range(n), 2))
    col = {p: c for c, p in enumerate(pairs)}
    rows = []
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        row = np.zeros(len(pairs))
        for a, b in zip(members, members[1:]):
            row[col[a, b]] = 1.0
        rows.append(row)
    return np.array(rows), np.array(pairs).reshape(-1, 2)


def variation_power_bruteforce(m, r) -> float:
    """Exhaustive maximum over all ``2^N - 1`` subsequences (small N only)."""
    _check_r(r)
    v = _as_values(m)
    n = v.size
    if n > 16:
        raise ValueError("exhaustive enumeration limited to N <= 16")
    if n < 2:
        return 0.0
    incidence, pairs = _consecutive_pairs(n)
    pair_vals = np.abs(v[pairs[:, 1]] - v[pairs[:, 0]]) ** r
    return float((incidence @ pair_vals).max())
