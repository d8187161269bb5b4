import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from varmult.decomposition import (C_COEF, C_COUNT, Decomposition, decompose,
                                   greedy_step_approx, level_threshold,
                                   reconstruct, verify_lemma_bounds)
from varmult.grid import FreqInterval, freq_offset
from varmult.variation import variation_power, vr_norm


def indicator(n, lo, hi, a=1.0):
    m = np.zeros(n)
    m[lo:hi + 1] = a
    return m


def test_greedy_constant():
    stops, step = greedy_step_approx(np.full(16, 0.7), 0.1)
    assert stops.tolist() == [0]
    np.testing.assert_array_equal(step.values, 0.7)


def test_greedy_indicator():
    m = indicator(16, 5, 9)
    stops, step = greedy_step_approx(m, 0.5)
    assert stops.tolist() == [0, 5, 10]
    np.testing.assert_array_equal(step.values, m)


@pytest.mark.parametrize("r", [1.0, 1.5, 2.0])
def test_greedy_guarantees(rng, r):
    m = np.cumsum(rng.standard_normal(64)) * 0.2
    eps = 0.1
    stops, step = greedy_step_approx(m, eps)
    assert np.abs(m - step.values).max() < eps
    assert len(stops) - 1 <= variation_power(m, r) / eps ** r
    # every stop moved by at least eps from the previous anchor
    assert np.all(np.abs(np.diff(m[stops])) >= eps)


def test_greedy_rejects_bad_eps():
    with pytest.raises(ValueError):
        greedy_step_approx(np.zeros(4), 0.0)


def test_decompose_constant():
    d = decompose(np.full(32, -1.25), 1.5)
    assert len(d.levels[0]) == 1
    piece = d.levels[0][0]
    assert piece.interval == FreqInterval.full(32)
    assert piece.coeff == -1.25
    assert all(len(level) == 0 for level in d.levels[1:])
    assert d.residual_sup == 0.0
    rep = verify_lemma_bounds(d)
    assert rep.passed and rep.counts[0] == 1 and sum(rep.counts[1:]) == 0


@pytest.mark.parametrize("r", [1.0, 1.5, 1.9])
def test_decompose_interval(r):
    n, a = 32, -0.8
    m = indicator(n, 10, 20, a)
    d = decompose(m, r, tol=0.5 * abs(a))
    assert d.rho == pytest.approx(abs(a) * (1 + 2 ** (1 / r)))
    off = freq_offset(n)
    # the jump is picked up at the first level whose threshold drops to |a|
    first = next(j for j in range(len(d.levels)) if level_threshold(j, r, d.rho) <= abs(a))
    for j, level in enumerate(d.levels):
        expected = [(FreqInterval(10 - off, 20 - off), a)] if j == first else []
        assert [(p.interval, p.coeff) for p in level] == expected
    np.testing.assert_array_equal(reconstruct(d).values, m)
    assert verify_lemma_bounds(d).passed


def test_decompose_zero():
    d = decompose(np.zeros(8), 1.5)
    assert d.rho == 0 and d.levels == ((),)
    np.testing.assert_array_equal(reconstruct(d).values, 0.0)


def test_decompose_rejects_bad_args():
    with pytest.raises(ValueError):
        decompose(np.ones(8), 0.9)
    with pytest.raises(ValueError):
        decompose(np.ones(8), 1.5, tol=0.0)


def test_decompose_random_n64(rng):
    m = rng.standard_normal(64)
    r = 1.5
    rho = vr_norm(m, r)
    tol = 1e-3 * rho
    d = decompose(m, r, tol=tol)
    assert level_threshold(d.depth, r, rho) <= tol < level_threshold(d.depth - 1, r, rho)
    assert d.residual_sup <= tol
    err = np.abs(reconstruct(d).values + d.residual - m).max()
    assert err <= 1e-12 * rho
    # bounds recomputed from the pieces directly
    partial = np.zeros(64)
    for j, level in enumerate(d.levels):
        assert len(level) <= C_COUNT * 2 ** j
        for p in level:
            assert abs(p.coeff) <= C_COEF * 2 ** (-j / r) * rho
            partial[p.interval.positions(64)] += p.coeff
        assert np.abs(partial - m).max() < 2 ** (-j / r) * rho + 1e-12 * rho
    assert np.abs(partial - m).max() <= tol


def test_reconstruct_empty():
    d = Decomposition(8, 1.5, 0.0, ((), ()), np.zeros(8))
    np.testing.assert_array_equal(reconstruct(d).values, 0.0)


def test_reconstruct_range_check():
    from varmult.decomposition import LevelPiece
    d = Decomposition(8, 1.5, 1.0, ((LevelPiece(FreqInterval(0, 9), 1.0),),),
                      np.zeros(8))
    with pytest.raises(ValueError):
        reconstruct(d)


def test_scaling_by_two(rng):
    m = rng.standard_normal(64)
    a, b = decompose(m, 1.5), decompose(2 * m, 1.5)
    assert len(a.levels) == len(b.levels)
    for la, lb in zip(a.levels, b.levels):
        assert [p.interval for p in la] == [p.interval for p in lb]
        assert [2 * p.coeff for p in la] == [p.coeff for p in lb]


def test_report_shifted_checks(rng):
    d = decompose(np.cumsum(rng.standard_normal(64)), 1.2)
    rep = verify_lemma_bounds(d)
    assert rep.passed and rep.shifted_passed
    doc = rep.as_dict()
    assert doc["level_shift"] == 2 and doc["passed"]


def test_report_detects_violation():
    from varmult.decomposition import LevelPiece
    bad = Decomposition(8, 1.0, 1.0, ((LevelPiece(FreqInterval(-4, 3), 5.0),),),
                        np.zeros(8))
    assert not verify_lemma_bounds(bad).coeffs_ok
    overlap = Decomposition(8, 1.0, 1.0, ((LevelPiece(FreqInterval(-4, 0), 0.5),
                                           LevelPiece(FreqInterval(0, 3), 0.5)),),
                            np.zeros(8))
    assert not verify_lemma_bounds(overlap).disjoint_ok


multipliers = arrays(float, st.sampled_from([8, 16, 64]), elements=st.floats(-10, 10))


@settings(max_examples=60, deadline=None)
@given(multipliers, st.sampled_from([1.0, 1.3, 1.5, 1.9, 3.0]))
def test_decomposition_properties(m, r):
    d = decompose(m, r)
    rho = d.rho
    assert np.abs(reconstruct(d).values + d.residual - m).max() <= 1e-12 * max(rho, 1e-300)
    rep = verify_lemma_bounds(d)
    assert rep.passed, rep


@settings(max_examples=40, deadline=None)
@given(multipliers, st.sampled_from([0.25, 0.5, 2.0, 8.0]))
def test_positive_scaling_property(m, lam):
    a, b = decompose(m, 1.5), decompose(lam * m, 1.5)
    assert len(a.levels) == len(b.levels)
    for la, lb in zip(a.levels, b.levels):
        assert [p.interval for p in la] == [p.interval for p in lb]
        assert [lam * p.coeff for p in la] == [p.coeff for p in lb]
