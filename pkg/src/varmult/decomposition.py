"""Level-wise interval decomposition of a multiplier of bounded r-variation.

Level ``j`` uses the threshold ``eps_j = 2^(-j/r) * rho`` with
``rho = vr_norm(m, r)``.  A greedy stopping-time pass produces a step
function ``m_j`` with ``|m - m_j| < eps_j``; level 0 is ``m_0`` and level
``j >= 1`` is ``m_j - m_{j-1}``, each written as maximal constant runs.
The telescoped sum reproduces ``m_J`` and the residual is ``m - m_J``.

Every stop of level ``j`` adds at least ``eps_j^r`` to the r-variation along
the stopping subsequence, so a level has at most ``2^j`` stops beyond the
first.  A run of ``m_j - m_{j-1}`` never exceeds ``eps_{j-1} <= 2 eps_j``.
Hence ``|levels[j]| <= C_COUNT * 2^j`` and ``|b| <= C_COEF * 2^(-j/r) rho``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import FreqInterval, freq_offset
from .variation import Multiplier, _as_values, _check_r, vr_norm

__all__ = [
    "C_COUNT", "C_COEF", "LEVEL_SHIFT", "LevelPiece", "Decomposition",
    "LemmaReport", "greedy_step_approx", "decompose", "reconstruct",
    "verify_lemma_bounds", "level_threshold",
]

C_COUNT = 4
C_COEF = 2
LEVEL_SHIFT = 2


@dataclass(frozen=True)
class LevelPiece:
    interval: FreqInterval
    coeff: float


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Pieces by level plus the residual ``m - sum(levels)``."""

    n: int
    r: float
    source_norm: float
    levels: tuple
    residual: np.ndarray = field(repr=False)

    @property
    def rho(self):
        return self.source_norm

    @property
    def residual_sup(self):
        return float(np.abs(self.residual).max()) if self.residual.size else 0.0

    @property
    def depth(self):
        """Index ``J`` of the last level."""
        return len(self.levels) - 1

    def level_field(self, j):
        """Level ``j`` as an array on the grid."""
        out = np.zeros(self.n)
        for piece in self.levels[j]:
            out[piece.interval.positions(self.n)] += piece.coeff
        return out


def level_threshold(j, r, rho):
    return 2.0 ** (-j / r) * rho


def greedy_step_approx(m, eps):
    """Greedy stopping times for threshold ``eps``.

    Returns ``(stops, step)``: ``stops`` are array positions
    ``t_0 = 0 < t_1 < ...`` with ``t_{k+1}`` the first position after ``t_k``
    where ``|m - m[t_k]| >= eps``; ``step`` holds ``m[t_k]`` on
    ``[t_k, t_{k+1})``, so ``|m - step| < eps`` everywhere.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    v = _as_values(m)
    stops = [0]
    step = np.empty_like(v)
    anchor = v[0]
    for i, val in enumerate(v):
        if abs(val - anchor) >= eps:
            stops.append(i)
            anchor = val
        step[i] = anchor
    return np.array(stops), Multiplier(step)


def _runs(values, n):
    """Maximal constant runs with nonzero value, as level pieces."""
    off = freq_offset(n)
    pieces = []
    start = 0
    for i in range(1, n + 1):
        if i == n or values[i] != values[start]:
            if values[start] != 0:
                pieces.append(LevelPiece(
                    FreqInterval(start - off, i - 1 - off), float(values[start])))
            start = i
    return tuple(pieces)


def _depth(r, rho, tol):
    j = max(0, math.ceil(r * math.log2(rho / tol)))
    # settle the ceiling against rounding in log2
    while j > 0 and level_threshold(j - 1, r, rho) <= tol:
        j -= 1
    while level_threshold(j, r, rho) > tol:
        j += 1
    return j


def decompose(m, r, tol=None) -> Decomposition:
    """Decompose ``m`` into levels until the threshold drops to ``tol``.

    ``tol`` defaults to ``1e-6 * rho``.
    """
    _check_r(r)
    v = _as_values(m)
    n = v.size
    if tol is not None and not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    rho = vr_norm(v, r)
    if tol is None:
        tol = 1e-6 * rho
    if rho == 0:
        return Decomposition(n, r, 0.0, ((),), np.zeros(n))
    depth = _depth(r, rho, tol)
    levels = []
    prev = np.zeros(n)
    for j in range(depth + 1):
        _, step = greedy_step_approx(v, level_threshold(j, r, rho))
        levels.append(_runs(step.values - prev, n))
        prev = step.values
    return Decomposition(n, r, rho, tuple(levels), v - prev)


def reconstruct(d: Decomposition, n=None) -> Multiplier:
    """Sum of all level pieces (the residual is not included)."""
    n = d.n if n is None else n
    out = np.zeros(n)
    for level in d.levels:
        for piece in level:
            out[piece.interval.positions(n)] += piece.coeff
    return Multiplier(out)


@dataclass(frozen=True)
class LemmaReport:
    counts: tuple
    max_coeffs: tuple
    count_bounds: tuple
    coeff_bounds: tuple
    partial_errors: tuple
    thresholds: tuple
    counts_ok: bool
    coeffs_ok: bool
    partial_ok: bool
    shifted_counts_ok: bool
    shifted_coeffs_ok: bool
    disjoint_ok: bool

    @property
    def passed(self):
        return (self.counts_ok and self.coeffs_ok and self.partial_ok
                and self.disjoint_ok)

    @property
    def shifted_passed(self):
        return self.shifted_counts_ok and self.shifted_coeffs_ok

    def as_dict(self):
        return {
            "counts": list(self.counts),
            "max_coeffs": list(self.max_coeffs),
            "count_bounds": list(self.count_bounds),
            "coeff_bounds": list(self.coeff_bounds),
            "partial_errors": list(self.partial_errors),
            "thresholds": list(self.thresholds),
            "counts_ok": self.counts_ok,
            "coeffs_ok": self.coeffs_ok,
            "partial_ok": self.partial_ok,
            "disjoint_ok": self.disjoint_ok,
            "shifted_counts_ok": self.shifted_counts_ok,
            "shifted_coeffs_ok": self.shifted_coeffs_ok,
            "level_shift": LEVEL_SHIFT,
            "c_count": C_COUNT,
            "c_coef": C_COEF,
            "passed": self.passed,
        }


def verify_lemma_bounds(d: Decomposition, c_count=C_COUNT, c_coef=C_COEF,
                        shift=LEVEL_SHIFT) -> LemmaReport:
    """Check level sizes, coefficient sizes and partial-sum errors of ``d``.

    Raw checks use ``c_count * 2^j`` and ``c_coef * 2^(-j/r) rho``.  The
    shifted checks use unit constants with level ``j`` compared against
    ``2^(j + shift)`` for counts and ``2^(-max(j - shift, 0)/r) rho`` for
    coefficients.  Partial sums through level ``j`` must lie within
    ``2^(-j/r) rho`` of the source (plus ``1e-12 rho`` rounding slack).
    """
    r, rho = d.r, d.rho
    counts = tuple(len(level) for level in d.levels)
    max_coeffs = tuple(max((abs(p.coeff) for p in level), default=0.0)
                       for level in d.levels)
    js = range(len(d.levels))
    count_bounds = tuple(c_count * 2 ** j for j in js)
    coeff_bounds = tuple(c_coef * level_threshold(j, r, rho) for j in js)
    thresholds = tuple(level_threshold(j, r, rho) for j in js)

    source = reconstruct(d).values + d.residual
    partial = np.zeros(d.n)
    errors = []
    for j in js:
        partial += d.level_field(j)
        errors.append(float(np.abs(source - partial).max()))

    disjoint = True
    for level in d.levels:
        ivs = sorted(p.interval for p in level)
        disjoint &= all(b.lo > a.hi for a, b in zip(ivs, ivs[1:]))

    slack = 1e-12 * rho
    return LemmaReport(
        counts=counts,
        max_coeffs=max_coeffs,
        count_bounds=count_bounds,
        coeff_bounds=coeff_bounds,
        partial_errors=tuple(errors),
        thresholds=thresholds,
        counts_ok=all(c <= b for c, b in zip(counts, count_bounds)),
        coeffs_ok=all(c <= b + slack for c, b in zip(max_coeffs, coeff_bounds)),
        partial_ok=rho == 0 or all(e < t + slack for e, t in zip(errors, thresholds)),
        shifted_counts_ok=all(c <= 2 ** (j + shift) for j, c in enumerate(counts)),
        shifted_coeffs_ok=all(
            c <= level_threshold(max(j - shift, 0), r, rho) + slack
            for j, c in enumerate(max_coeffs)),
        disjoint_ok=disjoint,
    )
