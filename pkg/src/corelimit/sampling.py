"""Seedable uniform sampling of distinct-part (s, s+1)-cores.

A core is drawn in two stages: the number of parts k with probability
C(s-k, k)/Fib(s+1), then a uniform k-subset of {1, ..., s-k}. The first stage
compares one 64-bit word against integer thresholds ceil(2**64 * P(W <= k)),
so each p_k is off by less than 2**-64.

Randomness always comes from an injected ``numpy.random.Generator``; use
:func:`make_rng` for the PCG64 stream that the CLI and tests rely on.
"""

from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import TextIO

import numpy as np

from .core_enum import DistinctCore, count_fixed_k, fibonacci
from .exact_dist import SCHEMA, mixture_distribution
from .normal_approx import phi_cdf
from .rank1_cclt import rank1_stats

KS_COEFF_1PCT = 1.63
_TWO64 = 1 << 64
_CHUNK = 1 << 20  # random keys per block when drawing subsets in bulk


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class SampleConfig:
    s: int
    n_samples: int
    seed: int

    def __post_init__(self) -> None:
        if self.s < 1:
            raise ValueError("s must be a positive integer")
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        if not 0 <= self.seed < _TWO64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def rng(self) -> np.random.Generator:
        return make_rng(self.seed)


@dataclass(frozen=True)
class KsReport:
    statistic: float
    critical_value_1pct: float
    passed: bool
    n: int

    def to_json(self) -> dict:
        return {
            "statistic": self.statistic,
            "critical_value_1pct": self.critical_value_1pct,
            "pass": self.passed,
            "n": self.n,
        }


@lru_cache(maxsize=32)
def _k_thresholds(s: int) -> tuple[int, ...]:
    total = fibonacci(s + 1)
    cum = 0
    out = []
    for k in range(s // 2 + 1):
        cum += count_fixed_k(s, k)
        out.append(-((-cum * _TWO64) // total))
    return tuple(out)


def _uint64_words(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.integers(0, _TWO64, size=n, dtype=np.uint64)


def _draw_k(s: int, n: int, rng: np.random.Generator) -> np.ndarray:
    # the last threshold is 2**64 and catches everything above the others
    inner = np.array([min(t, _TWO64 - 1) for t in _k_thresholds(s)[:-1]], dtype=np.uint64)
    return np.searchsorted(inner, _uint64_words(rng, n), side="right")


def uniform_k_subset(m: int, k: int, rng: np.random.Generator) -> tuple[int, ...]:
    """Uniform k-subset of {1, ..., m}, sorted ascending."""
    if k < 0 or m < 0:
        raise ValueError("m and k must be non-negative")
    if k > m:
        raise ValueError(f"cannot choose {k} elements out of {m}")
    if k == 0:
        return ()
    return tuple(int(v) + 1 for v in np.sort(rng.choice(m, size=k, replace=False)))


def _random_k_subsets(m: int, k: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent uniform k-subsets of {1..m}, one sorted row each."""
    if k == 0 or count == 0:
        return np.zeros((count, k), dtype=np.int64)
    rows = max(1, _CHUNK // m)
    blocks = []
    for start in range(0, count, rows):
        keys = rng.random((min(rows, count - start), m))
        # indices of the k smallest keys form a uniform k-subset
        blocks.append(np.argpartition(keys, k - 1, axis=1)[:, :k])
    return np.sort(np.concatenate(blocks), axis=1) + 1


def sample_core(s: int, rng: np.random.Generator) -> DistinctCore:
    if s < 1:
        raise ValueError("s must be a positive integer")
    u = int(_uint64_words(rng, 1)[0])
    k = next(i for i, t in enumerate(_k_thresholds(s)) if u < t)
    return DistinctCore(s, tuple(reversed(uniform_k_subset(s - k, k, rng))))


def _sample_batch(s: int, n: int, rng: np.random.Generator) -> tuple[np.ndarray, dict[int, np.ndarray]]:
    ks = _draw_k(s, n, rng)
    subsets = {}
    for k in np.unique(ks):
        k = int(k)
        subsets[k] = _random_k_subsets(s - k, k, int(np.count_nonzero(ks == k)), rng)
    return ks, subsets


def sample_sizes(s: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Sizes of ``n`` independent uniform cores."""
    if s < 1 or n < 1:
        raise ValueError("s and n must be positive")
    ks, subsets = _sample_batch(s, n, rng)
    sizes = np.empty(n, dtype=np.int64)
    for k, rows in subsets.items():
        sizes[ks == k] = rows.sum(axis=1)
    return sizes


def sample_cores(s: int, n: int, rng: np.random.Generator) -> list[DistinctCore]:
    if s < 1 or n < 1:
        raise ValueError("s and n must be positive")
    ks, subsets = _sample_batch(s, n, rng)
    cursor = {k: 0 for k in subsets}
    out = []
    for k in ks:
        k = int(k)
        row = subsets[k][cursor[k]]
        cursor[k] += 1
        out.append(DistinctCore(s, tuple(int(v) for v in row[::-1])))
    return out


def empirical_ks(cfg: SampleConfig) -> KsReport:
    """KS statistic of sampled sizes against the exact size CDF (not the normal)."""
    if cfg.n_samples < 1000:
        raise ValueError("empirical_ks needs at least 1000 samples")
    sizes = sample_sizes(cfg.s, cfg.n_samples, cfg.rng())
    d = mixture_distribution(cfg.s)
    if sizes.min() < d.min_size or sizes.max() > d.max_size:
        raise AssertionError("sampled a size outside the exact support")
    hist = np.bincount(sizes - d.offset, minlength=len(d.dense))
    n, total = cfg.n_samples, d.total
    stat = 0.0
    emp = exact = 0
    for h, c in zip(hist.tolist(), d.dense):
        emp += h
        exact += c
        stat = max(stat, abs(emp / n - exact / total))
    crit = KS_COEFF_1PCT / math.sqrt(n)
    return KsReport(stat, crit, stat < crit, n)


def ks_against_normal(values: np.ndarray) -> float:
    """Sup-distance between the empirical CDF of ``values`` and Phi."""
    vals, counts = np.unique(np.asarray(values, dtype=float), return_counts=True)
    n = counts.sum()
    below = 0
    worst = 0.0
    for v, c in zip(vals.tolist(), counts.tolist()):
        ph = phi_cdf(v)
        worst = max(worst, abs(below / n - ph))
        below += c
        worst = max(worst, abs(below / n - ph))
    return worst


def _standardise(sums: np.ndarray, m: int, k: int) -> np.ndarray:
    st = rank1_stats(m, k)
    if st.sigma2_A == 0:
        raise ValueError("zero variance")
    return (sums - float(st.mu_A)) / math.sqrt(st.sigma2_A)


def permutation_sum_sample(m: int, k: int, cfg: SampleConfig) -> np.ndarray:
    """Normalised permutation sums ``T_A`` for alpha = 1^k 0^(m-k), x_j = j.

    ``S_A`` only depends on the image of the first k indices under the
    permutation, which is a uniform k-subset of {1..m}.
    """
    if not 0 < k < m:
        raise ValueError("zero variance: need 0 < k < m")
    sums = _random_k_subsets(m, k, cfg.n_samples, cfg.rng()).sum(axis=1)
    return _standardise(sums, m, k)


def permutation_sum_exhaustive(m: int, k: int) -> np.ndarray:
    """``T_A`` for every k-subset; each value has probability 1/C(m, k)."""
    if not 0 < k < m:
        raise ValueError("zero variance: need 0 < k < m")
    sums = np.array([sum(c) for c in itertools.combinations(range(1, m + 1), k)], dtype=float)
    return _standardise(sums, m, k)


def write_sample_csv(out: TextIO, sizes: np.ndarray, s: int, seed: int) -> None:
    out.write(f"# schema={SCHEMA} s={s} seed={seed} n={len(sizes)}\n")
    out.write("size\n")
    buf = io.StringIO()
    np.savetxt(buf, sizes, fmt="%d")
    out.write(buf.getvalue())
