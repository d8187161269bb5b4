"""Desk-scale property suite behind ``varmult verify``.

Every check draws from a fixed seed, so a pass or failure is reproducible.
Checks look functions up through their modules at call time.
"""
from __future__ import annotations

import math

import numpy as np

from . import decomposition as dec
from . import grid, maximal, squarefun, variation
from .errors import HypothesisError, InvariantError

CHECKS = []


def check(name):
    def register(fn):
        CHECKS.append((name, fn))
        return fn
    return register


def _require(cond, name, detail=""):
    if not cond:
        raise InvariantError(name, detail)


def _rng(tag):
    return np.random.default_rng([20240601, tag])


def _signal(rng, n):
    return grid.GridFunction(rng.standard_normal(n) + 1j * rng.standard_normal(n))


def _naive_dft(v):
    n = v.size
    k = grid.frequencies(n)
    x = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, x) / n) @ v


def random_unit_multiplier(rng, n, r):
    """A unit-ball multiplier drawn from a mix of shapes."""
    kind = rng.integers(4)
    if kind == 0:
        m = rng.standard_normal(n)
    elif kind == 1:
        m = np.cumsum(rng.standard_normal(n))
    elif kind == 2:
        cuts = np.sort(rng.choice(np.arange(1, n), size=rng.integers(1, 6), replace=False))
        m = np.repeat(rng.standard_normal(cuts.size + 1), np.diff(np.r_[0, cuts, n]))
    else:
        m = np.sin(rng.uniform(0.5, 6) * np.linspace(0, np.pi, n) + rng.uniform(0, 6))
    if not np.any(m):
        m = np.ones(n)
    return variation.normalize_to_unit_ball(m, r)


@check("grid.dft_oracle")
def _dft_oracle():
    rng = _rng(1)
    for n in (2, 8, 16, 64):
        v = _signal(rng, n).values
        ref = _naive_dft(v)
        err = np.abs(grid.dft(v).coeffs - ref).max() / np.abs(ref).max()
        _require(err <= 1e-10, "grid.dft_oracle", f"N={n} err={err}")


@check("grid.round_trip")
def _round_trip():
    rng = _rng(2)
    for n in (4, 32, 256):
        v = _signal(rng, n).values
        back = grid.inverse_dft(grid.dft(v)).values
        _require(np.abs(back - v).max() <= 1e-12 * np.abs(v).max(),
                 "grid.round_trip", f"N={n}")


@check("grid.parseval")
def _parseval():
    rng = _rng(3)
    v = _signal(rng, 64).values
    lhs = grid.lp_norm(v, 2) ** 2
    rhs = np.sum(np.abs(grid.dft(v).coeffs) ** 2) / 64 ** 2
    _require(abs(lhs - rhs) <= 1e-12 * lhs, "grid.parseval")


@check("grid.multiplier_additivity")
def _additivity():
    rng = _rng(4)
    v = _signal(rng, 32).values
    m1, m2 = rng.standard_normal(32), rng.standard_normal(32)
    lhs = grid.apply_multiplier(v, m1 + m2).values
    rhs = grid.apply_multiplier(v, m1).values + grid.apply_multiplier(v, m2).values
    _require(np.abs(lhs - rhs).max() <= 1e-12 * max(1.0, np.abs(lhs).max()),
             "grid.multiplier_additivity")


@check("grid.partition_sum")
def _partition():
    rng = _rng(5)
    v = _signal(rng, 32).values
    lo, hi = -16, 15
    cut = int(rng.integers(lo + 1, hi))
    total = (grid.partial_sum(v, grid.FreqInterval(lo, cut - 1)).values
             + grid.partial_sum(v, grid.FreqInterval(cut, hi)).values)
    _require(np.abs(total - v).max() <= 1e-12 * np.abs(v).max(), "grid.partition_sum")


@check("grid.holder_monotone")
def _holder():
    rng = _rng(6)
    v = _signal(rng, 64).values
    ps = [1, 1.5, 2, 3, 7, math.inf]
    norms = [grid.lp_norm(v, p) for p in ps]
    _require(all(a <= b * (1 + 1e-12) for a, b in zip(norms, norms[1:])),
             "grid.holder_monotone", str(norms))


@check("variation.oracle")
def _variation_oracle():
    rng = _rng(10)
    for _ in range(60):
        n = int(rng.integers(1, 13))
        m = rng.standard_normal(n)
        for r in (1, 1.3, 1.7, 2, 3):
            a = variation.variation_power(m, r)
            b = variation.variation_power_bruteforce(m, r)
            _require(abs(a - b) <= 1e-12 * max(1.0, b), "variation.oracle",
                     f"N={n} r={r} dp={a} exhaustive={b}")


@check("variation.monotone_in_r")
def _var_monotone():
    rng = _rng(11)
    m = rng.standard_normal(40)
    rs = [1, 1.3, 1.7, 2, 3]
    vals = [variation.variation_power(m, r) ** (1 / r) for r in rs]
    _require(all(b <= a * (1 + 1e-12) for a, b in zip(vals, vals[1:])),
             "variation.monotone_in_r", str(vals))


@check("variation.homogeneity")
def _var_homog():
    rng = _rng(12)
    m = rng.standard_normal(30)
    for lam in (-2.5, 0.3, 7.0):
        a = variation.vr_norm(lam * m, 1.5)
        b = abs(lam) * variation.vr_norm(m, 1.5)
        _require(abs(a - b) <= 1e-12 * b, "variation.homogeneity")


@check("variation.refinement_r1")
def _var_r1():
    rng = _rng(13)
    m = rng.standard_normal(50)
    a = variation.variation_power(m, 1)
    b = np.abs(np.diff(m)).sum()
    _require(abs(a - b) <= 1e-12 * b, "variation.refinement_r1")


@check("variation.restriction")
def _var_restrict():
    rng = _rng(14)
    m = rng.standard_normal(40)
    for r in (1.2, 2.0):
        full = variation.variation_power(m, r)
        sub = m[np.sort(rng.choice(40, size=15, replace=False))]
        _require(variation.variation_power(sub, r) <= full * (1 + 1e-12),
                 "variation.restriction")


def _decomp_cases():
    rng = _rng(20)
    for i in range(30):
        r = (1.0, 1.5, 1.9)[i % 3]
        m = random_unit_multiplier(rng, 64, r).values * rng.uniform(0.5, 3)
        yield m, r


@check("decompose.reconstruction")
def _dec_recon():
    for m, r in _decomp_cases():
        d = dec.decompose(m, r)
        err = np.abs(dec.reconstruct(d).values + d.residual - m).max()
        _require(err <= 1e-12 * d.rho, "decompose.reconstruction", f"err={err}")
        _require(d.residual_sup <= 1e-6 * d.rho, "decompose.reconstruction",
                 "residual above tol")


@check("decompose.lemma_bounds")
def _dec_bounds():
    for m, r in _decomp_cases():
        rep = dec.verify_lemma_bounds(dec.decompose(m, r))
        _require(rep.disjoint_ok, "decompose.disjoint")
        _require(rep.partial_ok, "decompose.level_sup", str(rep.partial_errors))
        _require(rep.counts_ok and rep.coeffs_ok, "decompose.lemma_bounds",
                 f"counts={rep.counts}")


@check("decompose.scaling")
def _dec_scaling():
    rng = _rng(21)
    m = rng.standard_normal(64)
    a, b = dec.decompose(m, 1.5), dec.decompose(2.0 * m, 1.5)
    _require(len(a.levels) == len(b.levels), "decompose.scaling", "depth differs")
    for la, lb in zip(a.levels, b.levels):
        _require([p.interval for p in la] == [p.interval for p in lb],
                 "decompose.scaling", "intervals differ")
        _require(all(abs(2.0 * p.coeff - q.coeff) <= 1e-12 * abs(q.coeff)
                     for p, q in zip(la, lb)), "decompose.scaling")


@check("squarefun.oracle")
def _vc_oracle():
    rng = _rng(30)
    for _ in range(3):
        v = _signal(rng, 16).values
        cuts = np.r_[0, np.sort(rng.choice(np.arange(1, 16), size=11, replace=False)), 16]
        for s in (2.2, 3.0):
            dp = squarefun.var_carleson(v, s, endpoints=cuts, witness=False).values
            bf = squarefun.var_carleson_bruteforce(v, s, endpoints=cuts)
            _require(np.abs(dp - bf).max() <= 1e-12 * bf.max(), "squarefun.oracle")


@check("squarefun.witness")
def _vc_witness():
    rng = _rng(31)
    v = _signal(rng, 32).values
    fld = squarefun.var_carleson(v, 2.5)
    for x, coll in enumerate(fld.witness):
        val = squarefun.square_function(v, coll, 2.5).values[x]
        _require(abs(val - fld.values[x]) <= 1e-10 * max(1.0, fld.values[x]),
                 "squarefun.witness", f"x={x}")


@check("squarefun.dominance")
def _vc_dominance():
    rng = _rng(32)
    v = _signal(rng, 32).values
    vc = squarefun.var_carleson(v, 2.5, witness=False).values
    for _ in range(20):
        lo = int(rng.integers(-16, 16))
        hi = int(rng.integers(lo, 16))
        ps = np.abs(grid.partial_sum(v, grid.FreqInterval(lo, hi)).values)
        _require(np.all(ps <= vc * (1 + 1e-12) + 1e-12), "squarefun.dominance")


@check("squarefun.monotone_in_s")
def _vc_monotone():
    rng = _rng(33)
    v = _signal(rng, 32).values
    fields = squarefun.var_carleson_multi(v, [2.1, 2.5, 3.0, 4.0])
    for a, b in zip(fields, fields[1:]):
        _require(np.all(b.values <= a.values * (1 + 1e-12)), "squarefun.monotone_in_s")


@check("squarefun.coarsening")
def _vc_coarse():
    rng = _rng(34)
    v = _signal(rng, 32).values
    full = squarefun.var_carleson(v, 2.5, witness=False).values
    coarse = squarefun.var_carleson(v, 2.5, endpoints=np.arange(0, 33, 4),
                                    witness=False).values
    _require(np.all(coarse <= full * (1 + 1e-12)), "squarefun.coarsening")


@check("squarefun.chain")
def _chain():
    rng = _rng(35)
    for _ in range(5):
        m = random_unit_multiplier(rng, 64, 1.5)
        rep = squarefun.verify_chain(m, _signal(rng, 64), 1.5, 2.5)
        _require(rep.passed and rep.steps_passed, "squarefun.chain",
                 f"ratio={rep.max_ratio}")


@check("maximal.sandwich")
def _sandwich():
    rng = _rng(40)
    v = _signal(rng, 64).values
    rep = maximal.bound_report(v, 1.5, (2.0,), witness_points=range(0, 64, 4))
    _require(rep.sandwich_ok, "maximal.sandwich")
    for x, w in rep.witnesses.items():
        _require(variation.vr_norm(w, 1.5) <= 1 + 1e-9, "maximal.witness_feasible")
        val = abs(grid.apply_multiplier(v, w).values[x])
        _require(abs(val - rep.lower[x]) <= 1e-9 * rep.lower[x],
                 "maximal.witness_feasible", f"x={x}")


@check("maximal.single_mode")
def _single_mode():
    f = maximal.single_mode(32, 5, 1.75)
    low = maximal.maximal_lower(f, 1.5, witness_points=[0, 7])
    _require(np.allclose(low.values, 1.75, rtol=1e-12, atol=0), "maximal.single_mode")


@check("maximal.budget_monotone")
def _budget():
    rng = _rng(41)
    v = _signal(rng, 32).values
    lows = [maximal.maximal_lower(v, 1.3, maximal.LowerBudget(ascent_steps=k)).values
            for k in (0, 5, 20)]
    _require(all(np.all(b >= a) for a, b in zip(lows, lows[1:])),
             "maximal.budget_monotone")


@check("maximal.scale_equivariance")
def _scale():
    rng = _rng(42)
    v = _signal(rng, 32).values
    a = maximal.bound_report(v, 1.5)
    b = maximal.bound_report(3.0 * v, 1.5)
    _require(np.allclose(b.upper, 3.0 * a.upper, rtol=1e-9)
             and np.allclose(b.lower, 3.0 * a.lower, rtol=1e-9),
             "maximal.scale_equivariance")


@check("maximal.hypothesis_gate")
def _gate():
    for r, p in ((2.0, 3.0), (1.5, 1.5), (1.5, 1.2), (0.9, 2.0)):
        try:
            maximal.check_hypotheses(r, p)
        except HypothesisError:
            continue
        raise InvariantError("maximal.hypothesis_gate", f"accepted r={r}, p={p}")


def run_checks(names=None):
    """Run registered checks; returns ``[(name, passed, detail)]``."""
    results = []
    for name, fn in CHECKS:
        if names and name not in names:
            continue
        try:
            fn()
        except InvariantError as exc:
            results.append((name, False, str(exc)))
        else:
            results.append((name, True, ""))
    return results
