"""Exact size distributions, part-count weights and moments.

All counts are Python integers and all moments are :class:`fractions.Fraction`
values. Conversion to floating point is left to the caller.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterator, Mapping

import numpy as np

from .core_enum import fibonacci

SCHEMA = "core-limit/v1"


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, constant term first, without trailing zeros."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        coeffs = [int(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, z):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def shifted(self, by: int) -> "IntPolynomial":
        """Multiply by ``q**by``."""
        if self.is_zero():
            return self
        return IntPolynomial((0,) * by + self.coeffs)


@dataclass(frozen=True, eq=False)
class SizeDistribution:
    """Histogram of core sizes, stored densely from ``offset`` upward."""

    offset: int
    dense: tuple[int, ...]
    s: int | None = None

    def __post_init__(self) -> None:
        dense = [int(c) for c in self.dense]
        offset = self.offset
        while dense and dense[-1] == 0:
            dense.pop()
        lead = 0
        while lead < len(dense) and dense[lead] == 0:
            lead += 1
        if any(c < 0 for c in dense):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "dense", tuple(dense[lead:]))
        object.__setattr__(self, "offset", offset + lead if dense[lead:] else 0)

    @classmethod
    def from_counts(cls, counts: Mapping[int, int], s: int | None = None) -> "SizeDistribution":
        counts = {int(n): int(c) for n, c in counts.items() if c}
        if not counts:
            return cls(0, (), s)
        lo, hi = min(counts), max(counts)
        return cls(lo, tuple(counts.get(n, 0) for n in range(lo, hi + 1)), s)

    @property
    def counts(self) -> dict[int, int]:
        return {self.offset + i: c for i, c in enumerate(self.dense) if c}

    @property
    def total(self) -> int:
        return sum(self.dense)

    @property
    def min_size(self) -> int:
        return self.offset

    @property
    def max_size(self) -> int:
        return self.offset + len(self.dense) - 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SizeDistribution):
            return NotImplemented
        return self.offset == other.offset and self.dense == other.dense

    def __add__(self, other: "SizeDistribution") -> "SizeDistribution":
        if not self.dense:
            return other
        if not other.dense:
            return self
        lo = min(self.offset, other.offset)
        hi = max(self.max_size, other.max_size)
        acc = [0] * (hi - lo + 1)
        for d in (self, other):
            for i, c in enumerate(d.dense, start=d.offset - lo):
                acc[i] += c
        return SizeDistribution(lo, tuple(acc), self.s if self.s == other.s else None)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "s": self.s,
            "total": str(self.total),
            "counts": {str(n): str(c) for n, c in self.counts.items()},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: Mapping | str) -> "SizeDistribution":
        if isinstance(data, str):
            data = json.loads(data)
        dist = cls.from_counts({int(n): int(c) for n, c in data["counts"].items()}, data.get("s"))
        if "total" in data and int(data["total"]) != dist.total:
            raise ValueError("total does not match the sum of counts")
        return dist


@dataclass(frozen=True)
class ExactMoments:
    mean: Fraction
    variance: Fraction

    def __post_init__(self) -> None:
        if self.variance < 0:
            raise ValueError("variance must be non-negative")

    @property
    def stddev(self) -> float:
        return float(self.variance) ** 0.5


@dataclass(frozen=True)
class WeightDistribution:
    s: int
    weights: tuple[Fraction, ...]

    def __getitem__(self, k: int) -> Fraction:
        return self.weights[k]

    def __len__(self) -> int:
        return len(self.weights)


def gaussian_binomial(n: int, m: int) -> IntPolynomial:
    """Coefficients of the Gaussian binomial ``[n choose m]_q``.

    Built row by row from ``[i, j] = [i-1, j-1] + q**j [i-1, j]``.
    """
    if n < 0 or m < 0:
        raise ValueError("n and m must be non-negative")
    if m > n:
        return IntPolynomial(())
    m = min(m, n - m)
    row: list[list[int]] = [[1]]
    for i in range(1, n + 1):
        new = [[1]]
        for j in range(1, min(i, m) + 1):
            left = row[j - 1]
            deg = j * (i - j)
            coeffs = [0] * (deg + 1)
            coeffs[: len(left)] = left
            if j < i:
                for d, c in enumerate(row[j], start=j):
                    coeffs[d] += c
            new.append(coeffs)
        row = new
    return IntPolynomial(tuple(row[m]))


def _qbinomial_tables(s_max: int) -> Iterator[tuple[int, list[np.ndarray]]]:
    """Yield ``(s, [[s-k choose k]_q for k = 0..s//2])`` for s = 0..s_max.

    Uses ``[s-k, k] = [s-1-k, k] + q**(s-2k) [s-2-(k-1), k-1]``: either the
    largest part is below s - k, or it equals s - k and can be removed.
    """
    prev2: list[np.ndarray] = []
    prev1 = [np.array([1], dtype=object)]
    yield 0, prev1
    for s in range(1, s_max + 1):
        cur = []
        for k in range(s // 2 + 1):
            arr = np.zeros(k * (s - 2 * k) + 1, dtype=object)
            if 2 * k <= s - 1:
                a = prev1[k]
                arr[: len(a)] += a
            if k >= 1:
                b = prev2[k - 1]
                shift = s - 2 * k
                arr[shift : shift + len(b)] += b
            cur.append(arr)
        yield s, cur
        prev2, prev1 = prev1, cur


def _mixture_from_table(s: int, table: list[np.ndarray]) -> SizeDistribution:
    hi = max(k * (k + 1) // 2 + len(arr) - 1 for k, arr in enumerate(table))
    acc = np.zeros(hi + 1, dtype=object)
    for k, arr in enumerate(table):
        lo = k * (k + 1) // 2
        acc[lo : lo + len(arr)] += arr
    return SizeDistribution(0, tuple(int(c) for c in acc), s)


def iter_mixture_distributions(s_max: int, s_min: int = 1) -> Iterator[SizeDistribution]:
    """Mixture distributions for s = s_min..s_max, sharing one recurrence pass."""
    for s, table in _qbinomial_tables(s_max):
        if s >= max(s_min, 1):
            yield _mixture_from_table(s, table)


def iter_fixed_k_distributions(s_max: int, s_min: int = 1) -> Iterator[list[SizeDistribution]]:
    """Per-k distributions ``[X_{s,0}, ..., X_{s,s//2}]`` for s = s_min..s_max."""
    for s, table in _qbinomial_tables(s_max):
        if s >= max(s_min, 1):
            yield [
                SizeDistribution(k * (k + 1) // 2, tuple(int(c) for c in arr), s)
                for k, arr in enumerate(table)
            ]


def fixed_k_distribution(s: int, k: int) -> SizeDistribution:
    """Sizes of cores with exactly ``k`` parts: ``q**(k(k+1)/2) [s-k choose k]_q``."""
    if s < 1:
        raise ValueError("s must be a positive integer")
    if k < 0 or 2 * k > s:
        raise ValueError(f"k must lie in [0, {s // 2}]")
    return SizeDistribution(k * (k + 1) // 2, gaussian_binomial(s - k, k).coeffs, s)


@lru_cache(maxsize=64)
def mixture_distribution(s: int) -> SizeDistribution:
    """Sizes of all (s, s+1)-cores with distinct parts."""
    if s < 1:
        raise ValueError("s must be a positive integer")
    for dist in iter_mixture_distributions(s, s):
        return dist
    raise AssertionError("unreachable")


def exact_moments(d: SizeDistribution) -> ExactMoments:
    total = d.total
    if total == 0:
        raise ValueError("distribution is empty")
    s1 = sum((d.offset + i) * c for i, c in enumerate(d.dense))
    s2 = sum((d.offset + i) ** 2 * c for i, c in enumerate(d.dense))
    mean = Fraction(s1, total)
    return ExactMoments(mean, Fraction(s2, total) - mean * mean)


def fixed_k_moments(s: int, k: int) -> ExactMoments:
    if s < 1:
        raise ValueError("s must be a positive integer")
    if k < 0 or 2 * k > s:
        raise ValueError(f"k must lie in [0, {s // 2}]")
    return ExactMoments(
        Fraction(k * (s + 1 - k), 2),
        Fraction(k * (s + 1 - k) * (s - 2 * k), 12),
    )


def weight_distribution(s: int) -> WeightDistribution:
    """``p_k = C(s-k, k) / Fib(s+1)``, the law of the number of parts."""
    if s < 1:
        raise ValueError("s must be a positive integer")
    f = fibonacci(s + 1)
    return WeightDistribution(s, tuple(Fraction(comb(s - k, k), f) for k in range(s // 2 + 1)))


def weight_moments(s: int) -> ExactMoments:
    w = weight_distribution(s).weights
    mean = sum((k * p for k, p in enumerate(w)), Fraction(0))
    second = sum((k * k * p for k, p in enumerate(w)), Fraction(0))
    return ExactMoments(mean, second - mean * mean)


def g_s_polynomial(s: int) -> IntPolynomial:
    if s < 1:
        raise ValueError("s must be a positive integer")
    return IntPolynomial(tuple(comb(s - k, k) for k in range(s // 2 + 1)))


def g_s_closed_form(s: int, z: float) -> float:
    """Surd expression for ``sum_k C(s-k, k) z**k``, valid for z != -1/4."""
    r = cmath.sqrt(1 + 4 * z)
    val = (((1 + r) / 2) ** (s + 1) - ((1 - r) / 2) ** (s + 1)) / r
    return val.real
