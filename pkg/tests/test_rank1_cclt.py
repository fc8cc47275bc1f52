import math
from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import given, strategies as st

from corelimit.exact_dist import fixed_k_moments
from corelimit.rank1_cclt import (
    cclt_bound_factor,
    cclt_bound_factor_squared,
    corollary_bound_factor,
    corollary_bound_factor_squared,
    rank1_moments,
    rank1_stats,
    useful_bound_max,
    useful_range,
)


def permutation_moments(alpha, x):
    """Mean and variance of sum_i alpha_i x_pi(i) over all m! permutations."""
    sums = [sum(a * x[p] for a, p in zip(alpha, perm)) for perm in permutations(range(len(x)))]
    mean = Fraction(sum(sums), len(sums))
    return mean, sum((Fraction(v) - mean) ** 2 for v in sums) / len(sums)


def subset_moments(m, k):
    sums = [sum(c) for c in combinations(range(1, m + 1), k)]
    mean = Fraction(sum(sums), len(sums))
    return mean, sum((Fraction(v) - mean) ** 2 for v in sums) / len(sums)


def test_rank1_stats_examples():
    st6 = rank1_stats(6, 2)
    assert (st6.mu_A, st6.sigma2_A) == (7, Fraction(14, 3))
    st0 = rank1_stats(5, 0)
    assert (st0.mu_A, st0.sigma2_A) == (0, 0)
    assert math.isnan(st0.bound_factor)
    m = fixed_k_moments(9, 2)
    st7 = rank1_stats(7, 2)
    assert (st7.mu_A, st7.sigma2_A) == (m.mean, m.variance)


@pytest.mark.parametrize("m,k", [(5, 6), (5, -1), (0, 0)])
def test_rank1_stats_errors(m, k):
    with pytest.raises(ValueError):
        rank1_stats(m, k)


def test_rank1_stats_against_subset_sums():
    for m in range(1, 11):
        for k in range(m + 1):
            st_ = rank1_stats(m, k)
            assert (st_.mu_A, st_.sigma2_A) == subset_moments(m, k)


def test_rank1_stats_against_permutations():
    for m in range(1, 7):
        for k in range(m + 1):
            alpha = [1] * k + [0] * (m - k)
            st_ = rank1_stats(m, k)
            assert permutation_moments(alpha, list(range(1, m + 1))) == (st_.mu_A, st_.sigma2_A)


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=6))
def test_rank1_moments_general(pairs):
    alpha = [a for a, _ in pairs]
    x = [v for _, v in pairs]
    assert rank1_moments(alpha, x) == permutation_moments(alpha, x)


def test_rank1_moments_length_mismatch():
    with pytest.raises(ValueError):
        rank1_moments([1, 0], [1, 2, 3])


def test_rank1_agrees_with_core_moments():
    for s in range(1, 31):
        for k in range(s // 2 + 1):
            a = rank1_stats(s - k, k)
            b = fixed_k_moments(s, k)
            # core size = subset sum of {1..s-k}; the moments coincide exactly
            assert (a.mu_A, a.sigma2_A) == (b.mean, b.variance)


def test_cclt_bound_factor_examples():
    assert cclt_bound_factor(6, 2) == pytest.approx(162.0, rel=1e-14)
    assert cclt_bound_factor(2, 1) == pytest.approx(48 ** 1.5 / math.sqrt(2), rel=1e-14)
    assert rank1_stats(6, 2).bound_factor == cclt_bound_factor(6, 2)


@pytest.mark.parametrize("k", [0, 6])
def test_cclt_bound_factor_zero_variance(k):
    with pytest.raises(ValueError, match="zero variance"):
        cclt_bound_factor(6, k)


def test_corollary_bound_factor_examples():
    assert corollary_bound_factor(12, 3) == pytest.approx(12 ** 1.5 * 9 ** 2.5 / 18 ** 1.5, rel=1e-14)
    assert corollary_bound_factor(8, 2) == pytest.approx(162.0, rel=1e-14)


@pytest.mark.parametrize("s,k", [(8, 0), (8, 4), (9, 5)])
def test_corollary_bound_factor_errors(s, k):
    with pytest.raises(ValueError):
        corollary_bound_factor(s, k)


def test_corollary_equals_cclt_with_m_equal_s_minus_k():
    for s in range(3, 120):
        for k in range(1, (s + 1) // 2):
            assert corollary_bound_factor_squared(s, k) == cclt_bound_factor_squared(s - k, k)
            assert cclt_bound_factor_squared(s - k, k) == Fraction(12 * (s - k) ** 2, k * (s - 2 * k)) ** 3 / (s - k)
            assert corollary_bound_factor(s, k) == pytest.approx(math.sqrt(corollary_bound_factor_squared(s, k)), rel=1e-12)


def test_useful_range():
    assert list(useful_range(12)) == [3, 4]
    assert list(useful_range(13)) == [4]
    assert list(useful_range(8)) == [2]


def test_useful_bound_below_1000():
    for s in range(8, 401):
        ks = list(useful_range(s))
        if not ks:
            continue
        assert all(s / 4 <= k <= s / 3 for k in ks)
        assert useful_bound_max(s) <= 1000
