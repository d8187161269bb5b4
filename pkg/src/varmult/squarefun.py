"""Square functions over disjoint frequency intervals.

:func:`var_carleson` computes, at every spatial point, the supremum over all
collections of pairwise disjoint intervals (endpoints on a cut grid) of
``(sum_I |(1_I f^)check(x)|^s)^(1/s)``.  A cut ``c`` is the boundary in front
of array position ``c``, so cuts run ``0..N`` and the interval between cuts
``a < b`` covers positions ``a..b-1``.  Partial sums over such intervals are
differences of prefix fields, and the supremum is a one-dimensional dynamic
program over the cuts, run for all points at once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .decomposition import C_COEF, C_COUNT, decompose
from .errors import InvariantError
from .grid import (FreqInterval, IntervalCollection, _values,
                   apply_multiplier, conjugate_exponent, freq_offset,
                   mode_components, partial_sum)
from .variation import _as_values, vr_norm

__all__ = [
    "SquareFunctionField", "ChainReport", "default_cuts", "check_cuts",
    "prefix_fields", "square_function", "var_carleson", "var_carleson_multi",
    "var_carleson_bruteforce", "chain_constant", "verify_chain",
    "FULL_GRID_MAX_N",
]

FULL_GRID_MAX_N = 256
TIE_ULPS = 64


@dataclass(frozen=True, eq=False)
class SquareFunctionField:
    values: np.ndarray
    s: float
    collection: Optional[IntervalCollection] = None
    witness: Optional[list] = None
    cuts: Optional[np.ndarray] = None

    @property
    def size(self):
        return self.values.size

    @property
    def full_grid(self):
        """True when every cut was allowed, i.e. the value is the exact sup."""
        return self.cuts is None or self.cuts.size == self.values.size + 1


def default_cuts(n):
    """All ``n + 1`` cuts up to ``FULL_GRID_MAX_N``, every second cut beyond."""
    if n <= FULL_GRID_MAX_N:
        return np.arange(n + 1)
    return np.arange(0, n + 1, 2)


def check_cuts(cuts, n):
    if cuts is None:
        return default_cuts(n)
    c = np.asarray(cuts)
    if c.ndim != 1 or c.size < 2 or not np.issubdtype(c.dtype, np.integer):
        raise ValueError("endpoint grid must be a 1-d integer array of cuts")
    if c[0] != 0 or c[-1] != n or np.any(np.diff(c) <= 0):
        raise ValueError(
            f"endpoint grid must increase strictly from 0 to {n}")
    return c


def _abs_pow(z, s):
    # |z|^s from the squared modulus; exact zero stays zero
    sq = z.real ** 2 + z.imag ** 2 if np.iscomplexobj(z) else z * z
    out = np.zeros(sq.shape)
    nz = sq > 0
    out[nz] = np.exp(0.5 * s * np.log(sq[nz]))
    return out


def _root(v, s):
    out = np.zeros(v.shape)
    nz = v > 0
    out[nz] = np.exp(np.log(v[nz]) / s)
    return out


def prefix_fields(f, cuts=None):
    """``P[b, x]``: frequency restriction of ``f`` to positions ``< cuts[b]``."""
    v = _values(f)
    n = v.size
    cuts = check_cuts(cuts, n)
    c = mode_components(v)
    prefix = np.zeros((n + 1, n), dtype=complex)
    np.cumsum(c, axis=0, out=prefix[1:])
    return prefix[cuts]


def _interval(cuts, a, b, n):
    off = freq_offset(n)
    return FreqInterval(int(cuts[a]) - off, int(cuts[b]) - 1 - off)


def square_function(f, collection, s) -> SquareFunctionField:
    """``(sum_{I in collection} |(1_I f^)check|^s)^(1/s)`` at every point."""
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    v = _values(f)
    if not isinstance(collection, IntervalCollection):
        collection = IntervalCollection(collection)
    collection.check_range(v.size)
    total = np.zeros(v.size)
    for iv in collection:
        total += _abs_pow(partial_sum(v, iv).values, s)
    return SquareFunctionField(_root(total, s), s, collection=collection)


def _collection_dp(P, s_list, keep_choice):
    # best[b]: optimum over collections inside cuts[0..b]; ties prefer fewer
    # intervals, then the shortest last interval (skip counts as shortest).
    # Candidates within TIE_ULPS of the optimum count as ties, so intervals
    # carrying only roundoff never enter a witness.
    K = P.shape[0] - 1
    nx = P.shape[1]
    ns = len(s_list)
    best = np.zeros((ns, K + 1, nx))
    count = np.zeros((ns, K + 1, nx), dtype=np.int64)
    choice = np.full((ns, K + 1, nx), -1, dtype=np.int32) if keep_choice else None
    for b in range(1, K + 1):
        d = P[b] - P[:b]
        sq = d.real ** 2 + d.imag ** 2
        nz = sq > 0
        logsq = np.log(sq, where=nz, out=np.zeros(sq.shape))
        length = (b - np.arange(b))[:, None]
        for i, s in enumerate(s_list):
            pw = np.where(nz, np.exp(0.5 * s * logsq), 0.0)
            cand = best[i, :b] + pw
            skip = best[i, b - 1]
            top = np.maximum(cand.max(axis=0), skip)
            if not keep_choice:
                best[i, b] = top
                continue
            # rank: interval count first, then interval length
            floor = top * (1 - TIE_ULPS * np.finfo(float).eps)
            rank = np.where(cand >= floor, (count[i, :b] + 1) * (K + 2) + length,
                            np.iinfo(np.int64).max)
            j = rank.argmin(axis=0)
            cols = np.arange(nx)
            best_rank = rank[j, cols]
            skip_rank = np.where(skip >= floor, count[i, b - 1] * (K + 2),
                                 np.iinfo(np.int64).max)
            use_skip = skip_rank <= best_rank
            best[i, b] = top
            count[i, b] = np.where(use_skip, count[i, b - 1], count[i, j, cols] + 1)
            if keep_choice:
                choice[i, b] = np.where(use_skip, -1, j)
    return best[:, K], choice


def _backtrack(choice, cuts, n):
    K = choice.shape[0] - 1
    out = []
    for x in range(choice.shape[1]):
        ivs = []
        b = K
        while b > 0:
            a = choice[b, x]
            if a < 0:
                b -= 1
            else:
                ivs.append(_interval(cuts, a, b, n))
                b = a
        out.append(IntervalCollection(ivs))
    return out


def var_carleson_multi(f, s_list: Sequence[float], endpoints=None,
                       witness=False):
    """:func:`var_carleson` for several exponents sharing one pass."""
    for s in s_list:
        if not s > 1:
            raise ValueError(f"s must be > 1, got {s}")
    v = _values(f)
    n = v.size
    cuts = check_cuts(endpoints, n)
    P = prefix_fields(v, cuts)
    best, choice = _collection_dp(P, list(s_list), witness)
    fields = []
    for i, s in enumerate(s_list):
        wit = _backtrack(choice[i], cuts, n) if witness else None
        fields.append(SquareFunctionField(_root(best[i], s), s, witness=wit,
                                          cuts=cuts))
    return fields


def var_carleson(f, s, endpoints=None, witness=True) -> SquareFunctionField:
    """Pointwise sup of the ``l^s`` square function over disjoint collections.

    ``endpoints`` restricts interval endpoints to a cut grid (must contain
    0 and N).  With a coarse grid the result is a lower bound on the sup over
    all collections.  When ``witness`` is set, each point carries a
    collection attaining its value.
    """
    return var_carleson_multi(f, [s], endpoints, witness)[0]


@lru_cache(maxsize=None)
def _collections(K):
    # every collection of disjoint intervals between cuts 0..K, encoded
    # as a 0/1 matrix over the K(K+1)/2 intervals (a, b), a < b
    intervals = [(a, b) for b in range(1, K + 1) for a in range(b)]
    col = {iv: i for i, iv in enumerate(intervals)}
    rows = []

    def extend(start, chosen):
        row = np.zeros(len(intervals), dtype=np.int8)
        for iv in chosen:
            row[col[iv]] = 1
        rows.append(row)
        for a in range(start, K):
            for b in range(a + 1, K + 1):
                extend(b, chosen + [(a, b)])

    extend(0, [])
    return np.array(rows), intervals


def var_carleson_bruteforce(f, s, endpoints=None):
    """Exhaustive maximum over every disjoint collection (at most 12 blocks).

    Interval partial sums are computed independently through
    :func:`partial_sum`.
    """
    v = _values(f)
    n = v.size
    cuts = check_cuts(endpoints, n)
    K = cuts.size - 1
    if K > 12:
        raise ValueError("exhaustive enumeration limited to 12 blocks")
    incidence, intervals = _collections(K)
    vals = np.array([
        np.abs(partial_sum(v, _interval(cuts, a, b, n)).values) ** s
        for a, b in intervals])
    totals = incidence.astype(float) @ vals
    return totals.max(axis=0) ** (1.0 / s)


def chain_constant(r, s, c_count=C_COUNT, c_coef=C_COEF) -> float:
    """``c_coef * c_count^(1/s') / (1 - 2^(1/s' - 1/r))``.

    Sums the level series in the pointwise bound of a unit-ball multiplier
    by the variational square function; finite exactly when ``s < r'``.
    """
    if r < 1:
        raise ValueError(f"need r >= 1, got {r}")
    if not s > 1:
        raise ValueError(f"need s > 1, got {s}")
    if not s < conjugate_exponent(r):
        raise ValueError(
            f"level series diverges: need s < r' = {conjugate_exponent(r)}, got s={s}")
    inv_sc = 1.0 - 1.0 / s
    return c_coef * c_count ** inv_sc / (1.0 - 2.0 ** (inv_sc - 1.0 / r))


@dataclass(frozen=True)
class ChainReport:
    """Pointwise three-step chain for one multiplier and one signal.

    ``lhs`` is ``|(m f^)check|``; ``pieces`` sums ``|b| |(1_I f^)check|`` over
    the decomposition (plus a bound for its residual); ``holder`` applies
    Hölder level by level; ``rhs`` is ``chain_constant * var_carleson``.
    """

    lhs: np.ndarray
    pieces: np.ndarray
    holder: np.ndarray
    rhs: np.ndarray
    constant: float
    slack: float

    @property
    def max_ratio(self):
        nz = self.rhs > 0
        if not np.any(nz):
            return 0.0
        return float((self.lhs[nz] / self.rhs[nz]).max())

    @property
    def passed(self):
        return bool(np.all(self.lhs <= self.rhs + self.slack))

    @property
    def steps_passed(self):
        return bool(np.all(self.lhs <= self.pieces + self.slack)
                    and np.all(self.pieces <= self.holder + self.slack)
                    and np.all(self.holder <= self.rhs + self.slack))


def verify_chain(m, f, r, s, c_count=C_COUNT, c_coef=C_COEF) -> ChainReport:
    """Check ``|(m f^)check| <= chain_constant * var_carleson(f, s)`` pointwise.

    ``m`` must lie in the V^r unit ball (up to ``1e-9``).
    """
    mv = _as_values(m)
    v = _values(f)
    rho = vr_norm(mv, r)
    if rho > 1 + 1e-9:
        raise InvariantError("unit-ball", f"vr_norm(m) = {rho} > 1")
    const = chain_constant(r, s, c_count, c_coef)
    lhs = np.abs(apply_multiplier(v, mv).values)
    vc = var_carleson(v, s, endpoints=np.arange(v.size + 1), witness=False).values
    rhs = const * vc

    d = decompose(mv, r, tol=1e-12 * rho if rho > 0 else None)
    inv_sc = 1.0 - 1.0 / s
    pieces = np.zeros(v.size)
    holder = np.zeros(v.size)
    for level in d.levels:
        if not level:
            continue
        parts = np.array([np.abs(partial_sum(v, p.interval).values) for p in level])
        coeffs = np.array([abs(p.coeff) for p in level])
        pieces += coeffs @ parts
        holder += coeffs.max() * len(level) ** inv_sc * _root(
            (parts ** s).sum(axis=0), s)
    # the residual is below 1e-12 rho in sup; bound its contribution crudely
    tail = d.residual_sup * float(np.abs(mode_components(v)).sum(axis=0).max())
    pieces += tail
    holder += tail
    slack = 1e-9 * float(np.abs(v).max())
    return ChainReport(lhs, pieces, holder, rhs, const, slack)
