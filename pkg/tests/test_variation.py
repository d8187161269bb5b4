import itertools
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from varmult.variation import (Multiplier, normalize_to_unit_ball,
                               variation_path, variation_power,
                               variation_power_bruteforce, vr_norm,
                               vr_norm_batch)


def enumerate_subsequences(m, r):
    # plain-Python oracle, separate from the matrix form used by the package
    best = 0.0
    n = len(m)
    for size in range(2, n + 1):
        for idx in itertools.combinations(range(n), size):
            best = max(best, sum(abs(m[b] - m[a]) ** r for a, b in zip(idx, idx[1:])))
    return best


def interior_indicator(n=10, lo=3, hi=6):
    m = np.zeros(n)
    m[lo:hi + 1] = 1
    return m


def test_constant_has_no_variation():
    assert variation_power(np.full(9, 2.5), 1.7) == 0.0


@pytest.mark.parametrize("r", [1, 1.3, 2, 3])
def test_interior_indicator_power(r):
    assert variation_power(interior_indicator(), r) == pytest.approx(2.0, abs=1e-15)


@pytest.mark.parametrize("n", [3, 6, 9])
@pytest.mark.parametrize("r", [1, 1.3, 2.0])
def test_dp_matches_plain_enumeration(rng, n, r):
    m = rng.standard_normal(n)
    assert variation_power(m, r) == pytest.approx(enumerate_subsequences(m, r), rel=1e-12)


def test_dp_matches_bruteforce_length_12(rng):
    m = rng.standard_normal(12)
    assert vr_norm(m, 1.3) == pytest.approx(
        np.abs(m).max() + variation_power_bruteforce(m, 1.3) ** (1 / 1.3), rel=1e-12)


def test_bruteforce_agrees_with_plain_enumeration(rng):
    m = rng.standard_normal(8)
    assert variation_power_bruteforce(m, 1.7) == pytest.approx(
        enumerate_subsequences(m, 1.7), rel=1e-12)


def test_vr_norm_examples():
    assert vr_norm(np.full(5, 3.0), 1.5) == 3.0
    assert vr_norm(interior_indicator(), 2) == pytest.approx(1 + math.sqrt(2), abs=1e-12)
    assert vr_norm(interior_indicator(), 2) == pytest.approx(2.414213562, abs=1e-9)
    for r in (1, 1.5, 3):
        assert vr_norm([0, 0.3, 0.7, 1.0], r) == pytest.approx(2.0, abs=1e-12)


def test_r_below_one_rejected():
    with pytest.raises(ValueError):
        variation_power([0, 1], 0.5)
    with pytest.raises(ValueError):
        vr_norm([0, 1], 0.99)


def test_normalize_examples():
    np.testing.assert_allclose(normalize_to_unit_ball(np.full(4, 2.0), 1).values, 1.0)
    out = normalize_to_unit_ball(interior_indicator(), 2).values
    np.testing.assert_allclose(out, interior_indicator() / (1 + math.sqrt(2)), rtol=1e-14)


def test_normalize_random(rng):
    m = rng.standard_normal(50)
    assert vr_norm(normalize_to_unit_ball(m, 1.4), 1.4) == pytest.approx(1.0, rel=1e-12)


def test_normalize_zero_rejected():
    with pytest.raises(ValueError):
        normalize_to_unit_ball(np.zeros(4), 1.5)


def test_path_attains_power(rng):
    m = rng.standard_normal(30)
    path = variation_path(m, 1.6)
    assert path == sorted(path)
    total = sum(abs(m[b] - m[a]) ** 1.6 for a, b in zip(path, path[1:]))
    assert total == pytest.approx(variation_power(m, 1.6), rel=1e-12)


def test_path_tie_prefers_smallest_predecessor():
    # both 0 and 2 reach index 3 with the same gain; the earlier one is kept
    assert variation_path([0.0, 0.0, 0.0, 1.0], 2) == [0, 3]


def test_batch_matches_single(rng):
    ms = rng.standard_normal((5, 20))
    np.testing.assert_allclose(vr_norm_batch(ms, 1.3),
                               [vr_norm(m, 1.3) for m in ms], rtol=1e-12)


def test_multiplier_validation():
    with pytest.raises(ValueError):
        Multiplier([1.0, np.nan])
    with pytest.raises(ValueError):
        Multiplier(np.ones((2, 2)))


sequences = arrays(float, st.integers(1, 12), elements=st.floats(-100, 100))


@settings(max_examples=80, deadline=None)
@given(sequences, st.sampled_from([1, 1.3, 1.7, 2, 3]))
def test_oracle_equivalence_property(m, r):
    a = variation_power(m, r)
    b = variation_power_bruteforce(m, r)
    assert abs(a - b) <= 1e-12 * max(b, 1.0)


@settings(max_examples=60, deadline=None)
@given(sequences, st.floats(1, 4), st.floats(1, 4))
def test_monotone_in_r_property(m, r1, r2):
    r1, r2 = sorted((r1, r2))
    small = variation_power(m, r2) ** (1 / r2)
    large = variation_power(m, r1) ** (1 / r1)
    assert small <= large * (1 + 1e-12) + 1e-12


@settings(max_examples=60, deadline=None)
@given(sequences, st.one_of(st.just(0.0), st.floats(1e-3, 50), st.floats(-50, -1e-3)),
       st.floats(1, 3))
def test_homogeneity_property(m, lam, r):
    a = vr_norm(lam * m, r)
    b = abs(lam) * vr_norm(m, r)
    assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


@settings(max_examples=60, deadline=None)
@given(arrays(float, st.integers(2, 40), elements=st.floats(-100, 100)))
def test_r1_full_refinement_property(m):
    assert variation_power(m, 1) == pytest.approx(np.abs(np.diff(m)).sum(), rel=1e-12, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(arrays(float, st.integers(2, 30), elements=st.floats(-100, 100)), st.data(),
       st.sampled_from([1, 1.5, 2.5]))
def test_restriction_never_exceeds_property(m, data, r):
    mask = data.draw(arrays(bool, m.size))
    assume(mask.any())
    sub = m[mask]
    assert variation_power(sub, r) <= variation_power(m, r) * (1 + 1e-12) + 1e-12
