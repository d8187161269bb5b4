import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from varmult.errors import InvariantError
from varmult.grid import (FreqInterval, IntervalCollection, frequencies,
                          partial_sum)
from varmult.maximal import single_mode
from varmult.squarefun import (chain_constant, check_cuts, default_cuts,
                               square_function, var_carleson,
                               var_carleson_bruteforce, var_carleson_multi,
                               verify_chain)
from varmult.variation import normalize_to_unit_ball, vr_norm

from conftest import random_signal


def all_collections(cuts):
    """Every disjoint collection of intervals between grid cuts, recursively."""
    def rec(start):
        yield []
        for a in range(start, len(cuts) - 1):
            for b in range(a + 1, len(cuts)):
                for rest in rec(b):
                    yield [(cuts[a], cuts[b])] + rest
    return list(rec(0))


def test_collection_count_small_grids():
    # collections over K blocks: odd-indexed Fibonacci numbers F(2K+1)
    fib = [0, 1]
    while len(fib) < 30:
        fib.append(fib[-1] + fib[-2])
    for K in range(1, 7):
        assert len(all_collections(list(range(K + 1)))) == fib[2 * K + 1]


def enumerate_sup(f, s, cuts):
    n = f.size
    off = n // 2
    best = np.zeros(n)
    parts = {}
    for coll in all_collections(list(cuts)):
        total = np.zeros(n)
        for a, b in coll:
            if (a, b) not in parts:
                parts[a, b] = np.abs(partial_sum(f, FreqInterval(a - off, b - 1 - off)).values)
            total += parts[a, b] ** s
        best = np.maximum(best, total)
    return best ** (1 / s)


def test_square_function_full_range(rng):
    f = random_signal(rng, 16)
    out = square_function(f, [FreqInterval.full(16)], 2.0).values
    np.testing.assert_allclose(out, np.abs(f.values), rtol=1e-12)


@pytest.mark.parametrize("coll, expected", [
    ([(-8, -1), (0, 7)], 1.5),
    ([(-8, 2)], 1.5),
    ([(-8, -4), (4, 7)], 0.0),
])
def test_square_function_single_mode(coll, expected):
    f = single_mode(16, 2, 1.5)
    out = square_function(f, coll, 3.0).values
    np.testing.assert_allclose(out, expected, atol=1e-12)


def test_square_function_by_hand(rng):
    f = random_signal(rng, 32)
    coll = [(-16, -9), (-3, 0), (5, 15)]
    out = square_function(f, coll, 2.0).values
    by_hand = np.sqrt(sum(np.abs(partial_sum(f, FreqInterval(*c)).values) ** 2 for c in coll))
    np.testing.assert_allclose(out, by_hand, rtol=1e-12)


def test_square_function_rejects_overlap(rng):
    with pytest.raises(ValueError):
        square_function(random_signal(rng, 8), [(-4, 0), (0, 3)], 2.0)


@pytest.mark.parametrize("s", [1.5, 2.5, 4.0])
def test_var_carleson_single_mode(s):
    f = single_mode(32, -5, 0.75)
    fld = var_carleson(f, s)
    np.testing.assert_allclose(fld.values, 0.75, rtol=1e-12)
    for x, coll in enumerate(fld.witness):
        assert len(coll) == 1 and coll[0].lo <= -5 <= coll[0].hi


def test_var_carleson_zero():
    fld = var_carleson(np.zeros(16), 2.5)
    assert np.all(fld.values == 0)
    assert all(len(c) == 0 for c in fld.witness)


def test_var_carleson_matches_enumeration_n8(rng):
    f = random_signal(rng, 8)
    ref = enumerate_sup(f, 2.5, range(9))
    np.testing.assert_allclose(var_carleson(f, 2.5).values, ref, rtol=1e-12)


def test_var_carleson_n16_full_grid_vs_bruteforce_on_subgrids(rng):
    # the full 16-block grid is beyond exhaustive reach; check every 12-block
    # subgrid value is dominated and that the full DP equals the best of
    # sampled witness collections
    f = random_signal(rng, 16)
    full = var_carleson(f, 2.5)
    for _ in range(3):
        cuts = np.r_[0, np.sort(rng.choice(np.arange(1, 16), 11, replace=False)), 16]
        sub = var_carleson_bruteforce(f, 2.5, endpoints=cuts)
        assert np.all(sub <= full.values * (1 + 1e-12))
    for x, coll in enumerate(full.witness):
        assert square_function(f, coll, 2.5).values[x] == pytest.approx(full.values[x], rel=1e-10)


@pytest.mark.parametrize("s", [2.2, 3.0])
def test_var_carleson_matches_bruteforce_12_blocks(rng, s):
    f = random_signal(rng, 16)
    cuts = np.r_[0, np.sort(rng.choice(np.arange(1, 16), 11, replace=False)), 16]
    dp = var_carleson(f, s, endpoints=cuts).values
    bf = var_carleson_bruteforce(f, s, endpoints=cuts)
    assert np.abs(dp - bf).max() <= 1e-12 * bf.max()


def test_bruteforce_matches_plain_enumeration(rng):
    f = random_signal(rng, 8)
    cuts = [0, 2, 3, 6, 8]
    np.testing.assert_allclose(var_carleson_bruteforce(f, 2.2, endpoints=np.array(cuts)),
                               enumerate_sup(f, 2.2, cuts), rtol=1e-12)


def test_witness_consistency(rng):
    f = random_signal(rng, 32)
    fld = var_carleson(f, 2.7)
    for x, coll in enumerate(fld.witness):
        assert square_function(f, coll, 2.7).values[x] == pytest.approx(fld.values[x], rel=1e-10)


def test_witness_tie_breaking_prefers_fewer_intervals():
    # one active mode: every interval containing it ties; the witness must be
    # a single interval, the shortest admissible one ending at the last cut
    f = single_mode(8, 0, 1.0)
    fld = var_carleson(f, 2.0)
    for coll in fld.witness:
        assert len(coll) == 1
        assert coll[0].lo <= 0 <= coll[0].hi


def test_dominance_over_single_intervals(rng):
    f = random_signal(rng, 32)
    vc = var_carleson(f, 3.0, witness=False).values
    for lo in range(-16, 16, 3):
        for hi in range(lo, 16, 5):
            ps = np.abs(partial_sum(f, FreqInterval(lo, hi)).values)
            assert np.all(ps <= vc * (1 + 1e-12))


def test_monotone_in_s(rng):
    f = random_signal(rng, 32)
    fields = var_carleson_multi(f, [1.5, 2.0, 2.5, 3.5, 6.0])
    for a, b in zip(fields, fields[1:]):
        assert np.all(b.values <= a.values * (1 + 1e-12))


def test_multi_matches_single(rng):
    f = random_signal(rng, 32)
    multi = var_carleson_multi(f, [2.2, 2.9])
    for fld in multi:
        np.testing.assert_array_equal(fld.values, var_carleson(f, fld.s).values)


def test_coarsening_never_increases(rng):
    f = random_signal(rng, 64)
    full = var_carleson(f, 2.5, witness=False)
    assert full.full_grid
    for step in (2, 4, 8):
        coarse = var_carleson(f, 2.5, endpoints=np.arange(0, 65, step), witness=False)
        assert not coarse.full_grid
        assert np.all(coarse.values <= full.values * (1 + 1e-12))


def test_default_cuts():
    assert default_cuts(256).size == 257
    assert default_cuts(512).tolist() == list(range(0, 513, 2))


@pytest.mark.parametrize("cuts", [[0, 4], [1, 8], [0, 4, 4, 8], [0.0, 8.0]])
def test_invalid_endpoint_grid(cuts):
    with pytest.raises(ValueError):
        check_cuts(np.array(cuts), 8)


def geometric_series(r, s, c_count, c_coef, terms=20000):
    inv_sc = 1 - 1 / s
    return c_coef * c_count ** inv_sc * math.fsum(
        2.0 ** (j * (inv_sc - 1 / r)) for j in range(terms))


def test_chain_constant_r1_s2():
    assert chain_constant(1, 2, 1, 1) == pytest.approx(2 + math.sqrt(2), rel=1e-14)
    assert chain_constant(1, 2, 1, 1) == pytest.approx(3.414213562, abs=1e-9)


@pytest.mark.parametrize("r, s", [(1.5, 2.5), (1.2, 3.5), (1.0, 7.0)])
def test_chain_constant_matches_series(r, s):
    assert chain_constant(r, s) == pytest.approx(geometric_series(r, s, 4, 2), rel=1e-10)


def test_chain_constant_grows_towards_boundary():
    vals = [chain_constant(1.5, s) for s in (2.5, 2.9, 2.99)]
    assert 0 < vals[0] < vals[1] < vals[2]


@pytest.mark.parametrize("r, s", [(1.5, 3.0), (1.5, 3.5), (1.9, 3.0)])
def test_chain_constant_rejects_divergent(r, s):
    with pytest.raises(ValueError):
        chain_constant(r, s)


def test_verify_chain_identity(rng):
    f = random_signal(rng, 32)
    rep = verify_chain(np.ones(32), f, 1.5, 2.5)
    assert rep.passed and rep.steps_passed
    np.testing.assert_allclose(rep.lhs, np.abs(f.values), rtol=1e-12)


def test_verify_chain_interval(rng):
    f = random_signal(rng, 32)
    m = normalize_to_unit_ball(np.r_[np.zeros(10), np.ones(9), np.zeros(13)], 1.5)
    rep = verify_chain(m, f, 1.5, 2.5)
    assert rep.passed and rep.max_ratio <= 1


def test_verify_chain_rejects_outside_ball(rng):
    with pytest.raises(InvariantError):
        verify_chain(2 * np.ones(16), random_signal(rng, 16), 1.5, 2.5)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(1.0, 3.0), (1.5, 2.5), (1.9, 2.1)]))
def test_chain_property(seed, rs):
    r, s = rs
    g = np.random.default_rng(seed)
    m = normalize_to_unit_ball(np.cumsum(g.standard_normal(32)), r)
    f = random_signal(g, 32)
    rep = verify_chain(m, f, r, s)
    assert rep.passed and rep.steps_passed
