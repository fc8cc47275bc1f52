"""Normal approximation checks for exact core-size and part-count laws.

Exact rationals are kept for means, variances and CDF values; floats only
enter through arguments of the normal CDF/PDF and the final comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import mpmath
import numpy as np

from .exact_dist import (
    SizeDistribution,
    exact_moments,
    fixed_k_moments,
    g_s_polynomial,
    iter_mixture_distributions,
    mixture_distribution,
    weight_distribution,
    weight_moments,
)

SQRT2 = math.sqrt(2.0)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

C0 = (5 - math.sqrt(5)) / 10
TAIL_EPS = min(1 / 3 - C0, C0 - 0.25)
PITMAN_GLOBAL_CONSTANT = 0.7975
MIX_A = math.sqrt(8 / 5)
MIX_B = -math.sqrt(3 / 5)

QUAD_LIMIT = 12.0

# Envelopes measured on exact sweeps; the true constants are unknown.
SCALED_ENVELOPE = 0.3        # sqrt(s) * Kolmogorov distance, s >= 10 (max 0.283 at s = 10)
SCALED_ENVELOPE_SMALL = 0.5  # 2 <= s < 10 (max 0.497 at s = 4)
Y_K_WINDOW_ENVELOPE = 2.5    # normalised y_k residual for s/4 < k < s/3 (max 1.88 on 50..300)


class RootFindingError(RuntimeError):
    pass


def phi_cdf(x: float) -> float:
    """Standard normal CDF through the complementary error function."""
    if math.isnan(x):
        raise ValueError("phi_cdf is undefined for NaN")
    return 0.5 * math.erfc(-x / SQRT2)


def phi_pdf(x: float) -> float:
    if math.isnan(x):
        raise ValueError("phi_pdf is undefined for NaN")
    return INV_SQRT_2PI * math.exp(-0.5 * x * x)


_erfc = np.vectorize(math.erfc, otypes=[float])


def _phi_cdf_array(x: np.ndarray) -> np.ndarray:
    return 0.5 * _erfc(-np.asarray(x, dtype=float) / SQRT2)


def _phi_pdf_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return INV_SQRT_2PI * np.exp(-0.5 * x * x)


def _k0(s: int) -> int:
    # floor((5 - sqrt 5) s / 10) in integer arithmetic; sqrt(5) s is irrational
    return (5 * s - math.isqrt(5 * s * s) - 1) // 10


def _ratio(num: int, den: int) -> float:
    return num / den


@dataclass(frozen=True)
class DeviationReport:
    s: int | None
    kolmogorov: float
    scaled: float
    mean: float
    stddev: float

    FIELDS = ("s", "kolmogorov", "scaled", "mean", "stddev")

    def row(self) -> list[str]:
        return [str(self.s), *(f"{v:.12g}" for v in (self.kolmogorov, self.scaled, self.mean, self.stddev))]

    def to_json(self) -> dict:
        return {f: getattr(self, f) for f in self.FIELDS}


def kolmogorov_distance(d: SizeDistribution) -> DeviationReport:
    """Sup-distance between the law of ``d`` and the normal with its moments.

    F is a step function and Phi is continuous and increasing, so the
    supremum over the real line is attained at an atom, approached either
    from the right (F(y)) or from the left (F(y-)).
    """
    total = d.total
    if total == 0:
        raise ValueError("distribution is empty")
    sizes = range(d.offset, d.offset + len(d.dense))
    s1 = sum(n * c for n, c in zip(sizes, d.dense))
    s2 = sum(n * n * c for n, c in zip(sizes, d.dense))
    var_num = total * s2 - s1 * s1  # variance = var_num / total**2
    if var_num <= 0:
        raise ValueError("zero variance")
    sigma = math.sqrt(_ratio(var_num, total * total))
    worst = 0.0
    below = 0
    for n, c in zip(sizes, d.dense):
        if c == 0:
            continue
        z = _ratio(n * total - s1, total) / sigma
        ph = phi_cdf(z)
        left = _ratio(below, total)
        below += c
        right = _ratio(below, total)
        worst = max(worst, abs(right - ph), abs(left - ph))
    scaled = worst * math.sqrt(d.s) if d.s else float("nan")
    return DeviationReport(d.s, worst, scaled, _ratio(s1, total), sigma)


def scaled_envelope(s: int) -> float:
    return SCALED_ENVELOPE if s >= 10 else SCALED_ENVELOPE_SMALL


def trend_ok(values: Sequence[float], slack: float = 1.0) -> bool:
    """No upward trend: the last quarter's max is within ``slack`` of the first quarter's."""
    q = len(values) // 4
    if q == 0:
        return True
    return max(values[-q:]) <= slack * max(values[:q])


def deviation_sweep(s_min: int, s_max: int) -> list[DeviationReport]:
    if s_min < 1 or s_min > s_max:
        raise ValueError("need 1 <= s_min <= s_max")
    # s = 1 has a single core and zero variance
    lo = max(s_min, 2)
    return [kolmogorov_distance(d) for d in iter_mixture_distributions(s_max, lo)]


class PitmanGlobal(NamedTuple):
    max_residual: float
    bound: float
    passed: bool


def _weight_law(s: int) -> tuple[tuple[Fraction, ...], float, float]:
    w = weight_distribution(s).weights
    m = weight_moments(s)
    if m.variance == 0:
        raise ValueError("zero variance (s = 1)")
    return w, float(m.mean), math.sqrt(m.variance)


def pitman_global_check(s: int) -> PitmanGlobal:
    """Largest gap between partial sums of the weights and the normal CDF."""
    if s < 2:
        raise ValueError("zero variance (s = 1)")
    w, mu, sigma = _weight_law(s)
    worst = 0.0
    partial = Fraction(0)
    for k, p in enumerate(w):
        partial += p
        worst = max(worst, abs(float(partial) - phi_cdf((k - mu) / sigma)))
    bound = PITMAN_GLOBAL_CONSTANT / sigma
    return PitmanGlobal(worst, bound, worst < bound)


def pitman_local_residual(s: int) -> float:
    """``sigma * max_k |sigma p_k - phi((k - mu)/sigma)|``; the constant is unknown."""
    if s < 2:
        raise ValueError("zero variance (s = 1)")
    w, mu, sigma = _weight_law(s)
    worst = max(abs(sigma * float(p) - phi_pdf((k - mu) / sigma)) for k, p in enumerate(w))
    return sigma * worst


@dataclass(frozen=True)
class RootReport:
    s: int
    roots: tuple[complex, ...]
    max_imag: float
    max_root: float

    @property
    def imag_ok(self) -> bool:
        return all(abs(r.imag) <= 1e-6 * max(1.0, abs(r)) for r in self.roots)

    @property
    def bound_ok(self) -> bool:
        return all(r.real <= -0.25 + 1e-9 for r in self.roots)

    @property
    def passed(self) -> bool:
        return self.imag_ok and self.bound_ok


def aberth_roots(coeffs: Sequence[int], tol: float = 1e-10, max_iter: int = 500,
                 dps: int = 60) -> list[complex]:
    """All complex roots of an integer polynomial (constant term first).

    Companion-matrix eigenvalues seed an Aberth-Ehrlich iteration carried out
    in ``dps`` decimal digits, which copes with clustered roots that double
    precision cannot separate.
    """
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    n = len(coeffs) - 1
    if n < 1:
        return []
    with mpmath.workdps(dps):
        a = [mpmath.mpf(c) for c in reversed(coeffs)]
        seeds = np.roots([float(c) for c in reversed(coeffs)])
        # distinct, non-conjugate starting points
        z = [mpmath.mpc(complex(r)) * (1 + mpmath.mpf("1e-3") * mpmath.expj(0.7 * i + 0.3))
             for i, r in enumerate(seeds)]
        for _ in range(max_iter):
            worst = mpmath.mpf(0)
            for i in range(n):
                p = mpmath.mpc(0)
                dp = mpmath.mpc(0)
                for c in a:
                    dp = dp * z[i] + p
                    p = p * z[i] + c
                if p == 0:
                    continue
                ratio = p / dp
                repulsion = mpmath.fsum(1 / (z[i] - z[j]) for j in range(n) if j != i)
                step = ratio / (1 - ratio * repulsion)
                z[i] -= step
                worst = max(worst, abs(step) / max(1, abs(z[i])))
            if worst < tol:
                return sorted((complex(r) for r in z), key=lambda r: (r.real, r.imag))
    raise RootFindingError(f"Aberth iteration did not converge in {max_iter} steps")


def real_roots_check(s: int) -> RootReport:
    if not 2 <= s <= 60:
        raise ValueError("root finding is supported for 2 <= s <= 60")
    roots = aberth_roots(g_s_polynomial(s).coeffs)
    if len(roots) != s // 2:
        raise RootFindingError(f"expected {s // 2} roots, found {len(roots)}")
    return RootReport(
        s,
        tuple(roots),
        max(abs(r.imag) for r in roots),
        max(r.real for r in roots),
    )


def tail_mass(s: int, eps: float) -> float:
    """Weight of part counts outside ``[(c0 - eps) s, (c0 + eps) s]``."""
    if not 0 < eps < C0:
        raise ValueError(f"eps must lie in (0, {C0})")
    lo, hi = (C0 - eps) * s, (C0 + eps) * s
    w = weight_distribution(s).weights
    return float(sum((p for k, p in enumerate(w) if k < lo or k > hi), Fraction(0)))


def _gauss_legendre(f, a: float, b: float, panels: int, order: int = 16) -> float:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    t = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return math.fsum(w * f(t))


def mixing_quadrature(a: float, b: float, x: float, panels: int = 96) -> float:
    """``integral Phi(a x + b t) phi(t) dt`` by composite Gauss-Legendre.

    The range is cut to [-12, 12]; the discarded mass is below 1e-32.
    """
    return _gauss_legendre(
        lambda t: _phi_cdf_array(a * x + b * t) * _phi_pdf_array(t),
        -QUAD_LIMIT, QUAD_LIMIT, panels,
    )


class RiemannCheck(NamedTuple):
    error: float
    bound: float
    passed: bool


def riemann_total_variation_check(
    mesh: float,
    a: float = MIX_A,
    b: float = MIX_B,
    x_grid: Iterable[float] = tuple(np.arange(-3.0, 3.0001, 0.5)),
) -> RiemannCheck:
    """Left-endpoint Riemann sum of ``Phi(a x + b t) phi(t)`` against its integral.

    For each x the error must not exceed ``V_h * mesh`` where ``V_h`` is the
    integral of ``|h'|``. Returns the error and bound at the x with the
    tightest ratio, and whether every x passed.
    """
    if not 0 < mesh <= 1:
        raise ValueError("mesh must lie in (0, 1]")
    n = math.ceil(2 * QUAD_LIMIT / mesh)
    left = -QUAD_LIMIT + mesh * np.arange(n)
    widths = np.minimum(mesh, QUAD_LIMIT - left)
    worst = (0.0, 1.0)
    passed = True
    for x in x_grid:
        def h(t, x=x):
            return _phi_cdf_array(a * x + b * t) * _phi_pdf_array(t)

        def dh(t, x=x):
            u = a * x + b * t
            return np.abs(_phi_pdf_array(t) * (b * _phi_pdf_array(u) - t * _phi_cdf_array(u)))

        riemann = math.fsum(h(left) * widths)
        integral = _gauss_legendre(h, -QUAD_LIMIT, QUAD_LIMIT, 96)
        variation = _gauss_legendre(dh, -QUAD_LIMIT, QUAD_LIMIT, 480)
        err, bound = abs(riemann - integral), variation * mesh
        passed = passed and err <= bound
        if err / bound >= worst[0] / worst[1]:
            worst = (err, bound)
    return RiemannCheck(worst[0], worst[1], passed)


def summation_by_parts(U: Sequence[float], V: Sequence[float]) -> tuple[float, float]:
    """Both sides of the summation-by-parts identity.

    ``U`` holds U_m..U_{n+1} and ``V`` holds V_{m-1}..V_n, so both have
    length n - m + 2.
    """
    if len(U) != len(V):
        raise ValueError("U and V must have the same length")
    if len(U) < 2:
        raise ValueError("need n >= m, i.e. sequences of length >= 2")
    terms = range(len(U) - 1)
    lhs = math.fsum(U[j] * (V[j + 1] - V[j]) for j in terms)
    rhs = math.fsum([*((U[j] - U[j + 1]) * V[j + 1] for j in terms), U[-1] * V[-1], -U[0] * V[0]])
    return lhs, rhs


class YkRow(NamedTuple):
    k: int
    y_k: float
    y_k_star: float
    residual: float


def y_k_diagnostic(s: int, x: float, dist: SizeDistribution | None = None) -> list[YkRow]:
    """Compare the exact standardised thresholds y_k with their linearisation.

    ``residual`` is ``|y_k - y_k*| * sqrt(s) / (1 + |x t_k| + t_k**2)``.
    """
    if s < 3:
        raise ValueError("s must be at least 3")
    m = exact_moments(dist if dist is not None else mixture_distribution(s))
    sigma = math.sqrt(m.variance)
    k0 = _k0(s)
    scale = 5 ** 0.75 / math.sqrt(s)
    rows = []
    for k in range(1, (s + 1) // 2):
        mk = fixed_k_moments(s, k)
        y = (float(m.mean - mk.mean) + x * sigma) / math.sqrt(mk.variance)
        t = scale * (k - k0)
        y_star = MIX_A * x + MIX_B * t
        resid = abs(y - y_star) * math.sqrt(s) / (1 + abs(x * t) + t * t)
        rows.append(YkRow(k, y, y_star, resid))
    return rows
