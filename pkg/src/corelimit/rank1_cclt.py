"""Combinatorial CLT statistics for the rank-1 matrix ``a_ij = alpha_i * x_j``.

With ``alpha = (1,)*k + (0,)*(m-k)`` and ``x_j = j`` the permutation sum
``S_A = sum_i a_{i, pi(i)}`` is the sum of a uniform random k-subset of
{1, ..., m}. Bound factors are returned with Bolthausen's absolute constant K
divided out, since no explicit value for K is available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class Rank1Stats:
    m: int
    k: int
    mu_A: Fraction
    sigma2_A: Fraction
    bound_factor: float  # nan when sigma2_A == 0


def rank1_moments(alpha: Sequence[int | Fraction], x: Sequence[int | Fraction]) -> tuple[Fraction, Fraction]:
    """Mean and variance of ``S_A`` for a general rank-1 matrix.

    ``mu_A = m * mean(alpha) * mean(x)`` and
    ``sigma2_A = m**2/(m-1) * var(alpha) * var(x)`` (population variances).
    """
    m = len(alpha)
    if m != len(x) or m == 0:
        raise ValueError("alpha and x must be non-empty and of equal length")
    abar = Fraction(sum(alpha), m)
    xbar = Fraction(sum(x), m)
    mu = m * abar * xbar
    if m == 1:
        return mu, Fraction(0)
    va = sum((Fraction(a) - abar) ** 2 for a in alpha) / m
    vx = sum((Fraction(v) - xbar) ** 2 for v in x) / m
    return mu, Fraction(m * m, m - 1) * va * vx


def _check(m: int, k: int) -> None:
    if m < 1:
        raise ValueError("m must be a positive integer")
    if not 0 <= k <= m:
        raise ValueError(f"k must lie in [0, {m}]")


def rank1_stats(m: int, k: int) -> Rank1Stats:
    _check(m, k)
    mu = Fraction(k * (m + 1), 2)
    var = Fraction(k * (m - k) * (m + 1), 12)
    factor = cclt_bound_factor(m, k) if 0 < k < m else math.nan
    return Rank1Stats(m, k, mu, var, factor)


def cclt_bound_factor_squared(m: int, k: int) -> Fraction:
    _check(m, k)
    if k in (0, m):
        raise ValueError("zero variance")
    return Fraction(12 * m * m, k * (m - k)) ** 3 / m


def cclt_bound_factor(m: int, k: int) -> float:
    """``(12 m^2 / (k (m - k)))**1.5 / sqrt(m)``, the fixed-k CCLT bound over K."""
    _check(m, k)
    if k in (0, m):
        raise ValueError("zero variance")
    return (12 * m * m / (k * (m - k))) ** 1.5 / math.sqrt(m)


def corollary_bound_factor_squared(s: int, k: int) -> Fraction:
    if not 0 < k < s / 2:
        raise ValueError(f"k must satisfy 0 < k < s/2, got s={s}, k={k}")
    return Fraction(12 ** 3 * (s - k) ** 5, (k * (s - 2 * k)) ** 3)


def corollary_bound_factor(s: int, k: int) -> float:
    """``12**1.5 (s-k)**2.5 / (k (s-2k))**1.5``, the bound for cores with k parts over K."""
    if not 0 < k < s / 2:
        raise ValueError(f"k must satisfy 0 < k < s/2, got s={s}, k={k}")
    return 12 ** 1.5 * (s - k) ** 2.5 / (k * (s - 2 * k)) ** 1.5


def useful_range(s: int) -> range:
    """Integers k with s/4 <= k <= s/3."""
    return range(-(-s // 4), s // 3 + 1)


def useful_bound_max(s: int) -> float:
    """Largest ``corollary_bound_factor(s, k) * sqrt(s)`` over s/4 <= k <= s/3."""
    ks = [k for k in useful_range(s) if 0 < k < s / 2]
    if not ks:
        raise ValueError(f"no integer k in [s/4, s/3] for s={s}")
    return max(corollary_bound_factor(s, k) for k in ks) * math.sqrt(s)
