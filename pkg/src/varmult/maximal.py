"""Two-sided pointwise bounds for the maximal multiplier operator.

``M_r[f](x)`` is the supremum of ``|(m f^)check(x)|`` over real multipliers
with ``vr_norm(m, r) <= 1``.  The upper bound goes through the variational
square function: for every unit-ball ``m`` and every admissible ``s``,
``|(m f^)check(x)| <= chain_constant(r, s) * var_carleson(f, s)(x)``.  The
lower bound evaluates explicit unit-ball multipliers (constants, interval
indicators, few-jump step functions fitted per point) and then improves the
best of them by normalised gradient ascent.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .decomposition import C_COEF, C_COUNT
from .errors import HypothesisError
from .grid import (GridFunction, _values, conjugate_exponent, frequencies,
                   lp_norm, mode_components)
from .squarefun import (chain_constant, check_cuts, prefix_fields,
                        var_carleson_multi)
from .variation import Multiplier, vr_norm, vr_norm_batch

__all__ = [
    "LowerBudget", "LowerBound", "BoundReport", "check_hypotheses",
    "default_s_grid", "maximal_upper", "maximal_lower", "bound_report",
    "empirical_operator_norm", "random_signal", "single_mode",
    "MAX_WITNESS_POINTS", "S_CAP",
]

MAX_WITNESS_POINTS = 16
# s-grid ceiling when r' is infinite (r = 1)
S_CAP = 8.0

# fixed phase rotations tried by the step-function fit, besides the aligned ones
PHASES = 8

FAMILIES = ("constant", "interval", "greedy", "ascent")


def check_hypotheses(r, p):
    """Reject ``(r, p)`` outside ``1 <= r < 2``, ``r < p < inf``."""
    if not 1 <= r < 2:
        raise HypothesisError(f"need 1 <= r < 2, got r={r}")
    if not r < p < math.inf:
        raise HypothesisError(f"need r < p < inf, got r={r}, p={p}")


def default_s_grid(r, p=None, num=7):
    """Evenly spaced admissible ``s`` in ``(lo, r')`` kept 5% off both ends.

    ``lo`` is 2, or ``max(2, p')`` when ``p`` is given so that ``p > s'``.
    """
    if not 1 <= r < 2:
        raise HypothesisError(f"need 1 <= r < 2, got r={r}")
    lo = 2.0 if p is None else max(2.0, conjugate_exponent(p))
    hi = min(conjugate_exponent(r), S_CAP)
    if not lo < hi:
        raise HypothesisError(f"no admissible s for r={r}, p={p}")
    gap = hi - lo
    return list(np.linspace(lo + 0.05 * gap, hi - 0.05 * gap, num))


def maximal_upper(f, r, s_grid=None, endpoints=None, c_count=C_COUNT,
                  c_coef=C_COEF):
    """Pointwise upper bound and the ``s`` achieving it at each point.

    Returns ``(upper, s_used, full_grid)``; the bound is rigorous when
    ``full_grid`` is true (all cuts allowed).
    """
    if not 1 <= r < 2:
        raise HypothesisError(f"need 1 <= r < 2, got r={r}")
    s_grid = default_s_grid(r) if s_grid is None else list(s_grid)
    if not s_grid:
        raise ValueError("empty s grid")
    rc = conjugate_exponent(r)
    for s in s_grid:
        if not 2 < s < rc:
            raise ValueError(f"s={s} not in (2, r'={rc})")
    consts = np.array([chain_constant(r, s, c_count, c_coef) for s in s_grid])
    fields = var_carleson_multi(f, s_grid, endpoints)
    stacked = consts[:, None] * np.array([fl.values for fl in fields])
    pick = stacked.argmin(axis=0)
    upper = stacked[pick, np.arange(stacked.shape[1])]
    return upper, np.asarray(s_grid)[pick], fields[0].full_grid


@dataclass(frozen=True)
class LowerBudget:
    """Effort spent on the lower bound.

    ``max_jumps`` caps the step-function candidates; ``ascent_steps`` is the
    number of gradient steps; ``ascent_points`` limits the ascent to that many
    points with the largest starting value (``None``: every point).
    """

    max_jumps: int = 8
    ascent_steps: int = 20
    ascent_points: Optional[int] = None


@dataclass(frozen=True, eq=False)
class LowerBound:
    values: np.ndarray
    family: np.ndarray
    witnesses: dict = field(default_factory=dict)


def _best_interval(P, r):
    K = P.shape[0] - 1
    nx = P.shape[1]
    best = np.zeros(nx)
    arg = np.zeros((2, nx), dtype=int)
    interior = 1.0 + 2.0 ** (1.0 / r)
    for b in range(1, K + 1):
        norms = np.full(b, interior)
        norms[0] = 1.0 if b == K else 2.0
        if b == K:
            norms[1:] = 2.0
        vals = np.abs(P[b] - P[:b]) / norms[:, None]
        j = vals.argmax(axis=0)
        v = vals[j, np.arange(nx)]
        better = v > best
        best = np.where(better, v, best)
        arg[0] = np.where(better, j, arg[0])
        arg[1] = np.where(better, b, arg[1])
    return best, arg


def _step_fit(a, levels, max_jumps, r):
    """Step functions with values in ``levels`` and at most ``max_jumps``
    jumps maximising ``sum_k m[k] a[k, x] / vr_norm(m)``, for every ``x``.

    Returned columns are already scaled to V^r norm one.
    """
    n, nx = a.shape
    lv = np.asarray(levels, dtype=float)
    J = max_jumps
    dp = np.full((J + 1, 2, nx), -np.inf)
    dp[0] = lv[:, None] * a[0]
    back = np.zeros((n, J + 1, 2, nx), dtype=bool)
    for k in range(1, n):
        switch = np.full_like(dp, -np.inf)
        switch[1:] = dp[:-1, ::-1]
        sw = switch > dp
        dp = np.where(sw, switch, dp) + lv[None, :, None] * a[k]
        back[k] = sw
    jump_size = abs(lv[1] - lv[0])
    js = np.arange(J + 1)
    norms = np.max(np.abs(lv)) + jump_size * js ** (1.0 / r)
    score = dp / norms[:, None, None]
    if lv[0] == 0:
        score[0, 0] = -np.inf  # m == 0
    flat = score.reshape(-1, nx).argmax(axis=0)
    j, l = np.divmod(flat, 2)
    norm = norms[j]
    cols = np.arange(nx)
    m = np.empty((n, nx))
    for k in range(n - 1, -1, -1):
        m[k] = lv[l]
        if k:
            sw = back[k, j, l, cols]
            l = np.where(sw, 1 - l, l)
            j = np.where(sw, j - 1, j)
    # exactly j alternating jumps of equal size: the norm is known in closed form
    return m / norm[None, :]


def _aligned(c, theta):
    return (np.exp(-1j * theta)[None, :] * c).real


def _ascent(c, start, steps, r):
    """Normalised gradient ascent of ``|sum_k m[k] c[k]|`` per row of ``start``."""
    m = start.copy()
    best_m = m.copy()
    best = np.abs((m * c).sum(axis=1))
    for t in range(steps):
        out = (m * c).sum(axis=1)
        theta = np.angle(out)
        g = (np.exp(-1j * theta)[:, None] * c).real
        gmax = np.abs(g).max(axis=1)
        eta = np.where(gmax > 0, 0.5 / np.where(gmax > 0, gmax, 1.0), 0.0)
        m = m + (eta / math.sqrt(t + 1))[:, None] * g
        m = m / vr_norm_batch(m, r)[:, None]
        val = np.abs((m * c).sum(axis=1))
        better = val > best
        best = np.where(better, val, best)
        best_m[better] = m[better]
    return best, best_m


def maximal_lower(f, r, budget: Optional[LowerBudget] = None, endpoints=None,
                  witness_points: Sequence[int] = ()) -> LowerBound:
    """Pointwise lower bound on ``M_r[f]`` from explicit unit-ball multipliers.

    ``witness_points`` (at most 16) selects the points whose attaining
    multiplier is returned in ``witnesses``.
    """
    if r < 1:
        raise ValueError(f"need r >= 1, got r={r}")
    budget = budget or LowerBudget()
    witness_points = [int(x) for x in witness_points]
    if len(witness_points) > MAX_WITNESS_POINTS:
        raise ValueError(f"at most {MAX_WITNESS_POINTS} witness points")
    v = _values(f)
    n = v.size
    cuts = check_cuts(endpoints, n)
    c = mode_components(v)
    cols = np.arange(n)

    # constant multiplier
    lower = np.abs(v).astype(float)
    family = np.zeros(n, dtype=int)

    # single intervals on the cut grid
    P = prefix_fields(v, cuts)
    ival, iarg = _best_interval(P, r)
    better = ival > lower
    lower = np.where(better, ival, lower)
    family[better] = 1

    def interval_mult(x):
        a, b = cuts[iarg[0, x]], cuts[iarg[1, x]]
        m = np.zeros(n)
        m[a:b] = 1.0
        return m / vr_norm(m, r)

    # few-jump step functions aligned with the phase at each point
    K = cuts.size - 1
    interval_out = P[iarg[1], cols] - P[iarg[0], cols]
    greedy_val = np.zeros(n)
    greedy_m = np.zeros((n, n))
    if budget.max_jumps > 0:
        phases = [np.angle(v), np.angle(interval_out)]
        phases += [np.full(n, t) for t in 2 * np.pi * np.arange(PHASES) / PHASES]
        for theta in phases:
            a = _aligned(c, theta)
            for levels in ((0.0, 1.0), (-1.0, 1.0)):
                m = _step_fit(a, levels, budget.max_jumps, r)
                val = np.abs((m * c).sum(axis=0))
                upd = val > greedy_val
                greedy_val = np.where(upd, val, greedy_val)
                greedy_m[:, upd] = m[:, upd]
    better = greedy_val > lower
    lower = np.where(better, greedy_val, lower)
    family[better] = 2

    def start_mult(x):
        fam = family[x]
        if fam == 0:
            return np.ones(n)
        if fam == 1:
            return interval_mult(x)
        return greedy_m[:, x].copy()

    # normalised ascent from the best candidate so far
    ascent_m = {}
    if budget.ascent_steps > 0:
        if budget.ascent_points is None:
            pts = cols
        else:
            pts = np.sort(np.argsort(-lower, kind="stable")[:budget.ascent_points])
        if pts.size:
            start = np.array([start_mult(x) for x in pts])
            val, m = _ascent(c[:, pts].T, start, budget.ascent_steps, r)
            upd = val > lower[pts]
            for x, row, u in zip(pts, m, upd):
                if u:
                    ascent_m[int(x)] = row
            lower[pts] = np.where(upd, val, lower[pts])
            family[pts[upd]] = 3

    witnesses = {}
    for x in witness_points:
        if family[x] == 3:
            w = ascent_m[x]
        else:
            w = start_mult(x)
        witnesses[x] = Multiplier(w)
    return LowerBound(lower, np.array(FAMILIES)[family], witnesses)


@dataclass(frozen=True, eq=False)
class BoundReport:
    n: int
    r: float
    lower: np.ndarray
    upper: np.ndarray
    s_used: np.ndarray
    family: np.ndarray
    witnesses: dict
    lp_summary: dict
    full_grid: bool
    f_sup: float

    @property
    def sandwich_ok(self):
        return bool(np.all(self.lower <= self.upper + 1e-9 * self.f_sup))

    def as_dict(self):
        return {
            "n": self.n,
            "r": self.r,
            "full_grid": self.full_grid,
            "sandwich_ok": self.sandwich_ok,
            "lower": self.lower.tolist(),
            "upper": self.upper.tolist(),
            "s_used": self.s_used.tolist(),
            "family": self.family.tolist(),
            "witnesses": {str(x): w.values.tolist()
                          for x, w in sorted(self.witnesses.items())},
            "lp_summary": {str(p): v for p, v in self.lp_summary.items()},
        }


def bound_report(f, r, p_list=(2.0,), s_grid=None, budget=None,
                 endpoints=None, witness_points=()) -> BoundReport:
    """Lower and upper bounds plus their L^p norms relative to ``f``."""
    for p in p_list:
        check_hypotheses(r, p)
    v = _values(f)
    upper, s_used, full = maximal_upper(v, r, s_grid, endpoints)
    low = maximal_lower(v, r, budget, endpoints, witness_points)
    summary = {}
    for p in p_list:
        fp = lp_norm(v, p)
        lo, up = lp_norm(low.values, p), lp_norm(upper, p)
        summary[p] = {
            "lower": lo, "upper": up,
            "lower_ratio": lo / fp if fp else 0.0,
            "upper_ratio": up / fp if fp else 0.0,
        }
    return BoundReport(v.size, r, low.values, upper, s_used, low.family,
                       low.witnesses, summary, full,
                       float(np.abs(v).max()))


def random_signal(n, seed, trial=0):
    """Standard complex Gaussian signal; reproducible per ``(seed, n, trial)``."""
    ss = np.random.SeedSequence([int(seed), int(n), int(trial)])
    rng = np.random.Generator(np.random.Philox(ss))
    z = rng.standard_normal((2, n))
    return GridFunction((z[0] + 1j * z[1]) / math.sqrt(2.0))


def single_mode(n, k, amplitude=1.0):
    """``amplitude * exp(2 pi i k x / n)`` for a centered frequency ``k``."""
    if k not in frequencies(n):
        raise ValueError(f"frequency {k} outside the grid")
    x = np.arange(n)
    return GridFunction(amplitude * np.exp(2j * np.pi * k * x / n))


def _threads():
    t = int(os.environ.get("VARMULT_THREADS", "0") or 0)
    return t if t > 0 else (os.cpu_count() or 1)


SWEEP_BUDGET = LowerBudget(max_jumps=8, ascent_steps=20, ascent_points=16)


def empirical_operator_norm(r, p, n, trials, seed, s_grid=None, budget=None,
                            endpoints=None, quantiles=(0.5, 0.9)):
    """Distribution of ``||upper||_p/||f||_p`` and ``||lower||_p/||f||_p``.

    Draws ``trials`` Gaussian signals of size ``n``; deterministic for a given
    seed regardless of how trials are scheduled.
    """
    check_hypotheses(r, p)
    s_grid = default_s_grid(r, p) if s_grid is None else s_grid
    budget = budget or SWEEP_BUDGET

    def one(t):
        f = random_signal(n, seed, t)
        rep = bound_report(f, r, (p,), s_grid, budget, endpoints)
        row = rep.lp_summary[p]
        return row["upper_ratio"], row["lower_ratio"], rep.sandwich_ok, rep.full_grid

    workers = min(_threads(), trials)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(one, range(trials)))
    else:
        rows = [one(t) for t in range(trials)]
    up = np.array([row[0] for row in rows])
    lo = np.array([row[1] for row in rows])
    out = {
        "r": r, "p": p, "n": n, "trials": trials, "seed": seed,
        "upper_max": float(up.max()), "lower_max": float(lo.max()),
        "sandwich_ok": all(row[2] for row in rows),
        "full_grid": all(row[3] for row in rows),
    }
    for q in quantiles:
        out[f"upper_q{int(round(q * 100))}"] = float(np.quantile(up, q))
        out[f"lower_q{int(round(q * 100))}"] = float(np.quantile(lo, q))
    return out
