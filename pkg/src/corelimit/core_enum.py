"""Enumeration of (s, s+1)-cores with distinct parts.

A core with k distinct parts and largest part at most s - k is recorded as a
0/1 vector of length s - k with ones at the positions of its parts. The size
of the core is the inner product of that vector with (1, 2, ..., s - k).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, gcd
from typing import Iterator, Sequence

from .partition_core import Partition, is_s_core_beta, part_tuples


def fibonacci(n: int) -> int:
    """Fibonacci numbers with ``fibonacci(1) == fibonacci(2) == 1``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


@dataclass(frozen=True, order=True)
class DistinctCore:
    s: int
    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if self.s < 1:
            raise ValueError("s must be a positive integer")
        if any(p < 1 for p in parts):
            raise ValueError(f"parts must be positive, got {parts!r}")
        if any(parts[i] <= parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts must be strictly decreasing, got {parts!r}")
        if parts and parts[0] > self.s - len(parts):
            raise ValueError(
                f"largest part {parts[0]} exceeds s - k = {self.s - len(parts)}"
            )

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def partition(self) -> Partition:
        return Partition(self.parts)

    def __str__(self) -> str:
        return str(self.partition())


@dataclass(frozen=True)
class IndicatorVector:
    s: int
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        bits = tuple(self.bits)
        object.__setattr__(self, "bits", bits)
        if self.s < 1:
            raise ValueError("s must be a positive integer")
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"bits must be 0 or 1, got {bits!r}")
        k = sum(bits)
        if len(bits) != self.s - k:
            raise ValueError(
                f"vector with {k} ones must have length s - k = {self.s - k}, got {len(bits)}"
            )

    @property
    def k(self) -> int:
        return sum(self.bits)


def to_indicator(c: DistinctCore) -> IndicatorVector:
    bits = [0] * (c.s - c.k)
    for part in c.parts:
        bits[part - 1] = 1
    return IndicatorVector(c.s, tuple(bits))


def from_indicator(v: IndicatorVector | Sequence[int], s: int | None = None) -> DistinctCore:
    if not isinstance(v, IndicatorVector):
        if s is None:
            raise ValueError("s is required when passing a bare bit sequence")
        v = IndicatorVector(s, tuple(v))
    parts = tuple(j for j in range(len(v.bits), 0, -1) if v.bits[j - 1])
    return DistinctCore(v.s, parts)


def enumerate_fixed_k(s: int, k: int) -> list[DistinctCore]:
    """All cores with exactly ``k`` parts, in lexicographic order of sorted subsets."""
    if s < 1:
        raise ValueError("s must be a positive integer")
    if k < 0:
        raise ValueError("k must be non-negative")
    if 2 * k > s:
        return []
    return [
        DistinctCore(s, tuple(reversed(subset)))
        for subset in itertools.combinations(range(1, s - k + 1), k)
    ]


def iter_all(s: int) -> Iterator[DistinctCore]:
    for k in range(s // 2 + 1):
        yield from enumerate_fixed_k(s, k)


def enumerate_all(s: int) -> list[DistinctCore]:
    if s < 1:
        raise ValueError("s must be a positive integer")
    return list(iter_all(s))


def count_fixed_k(s: int, k: int) -> int:
    return comb(s - k, k) if 0 <= k and 2 * k <= s else 0


def count_all(s: int) -> int:
    return fibonacci(s + 1)


def brute_force_st_cores(s: int, t: int, size_cap: int) -> list[Partition]:
    """Every (s, t)-core of size at most ``size_cap``, by exhaustive search.

    This is an oracle for small cases and does not know the largest core
    size; ``(s*s - 1) * (t*t - 1) // 8`` is a safely generous cap.
    """
    if s < 1 or t < 1:
        raise ValueError("s and t must be positive integers")
    if gcd(s, t) != 1:
        raise ValueError(f"infinitely many cores: gcd({s}, {t}) != 1")
    if size_cap < 0:
        raise ValueError("size_cap must be non-negative")
    return [
        Partition(parts)
        for n in range(size_cap + 1)
        for parts in part_tuples(n)
        if is_s_core_beta(parts, s) and is_s_core_beta(parts, t)
    ]
