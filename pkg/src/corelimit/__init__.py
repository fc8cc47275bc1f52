"""Exact size laws of (s, s+1)-cores with distinct parts and their normal limit."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .core_enum import (
    DistinctCore,
    IndicatorVector,
    brute_force_st_cores,
    enumerate_all,
    enumerate_fixed_k,
    fibonacci,
    from_indicator,
    to_indicator,
)
from .exact_dist import (
    ExactMoments,
    IntPolynomial,
    SizeDistribution,
    WeightDistribution,
    exact_moments,
    fixed_k_distribution,
    fixed_k_moments,
    g_s_polynomial,
    gaussian_binomial,
    mixture_distribution,
    weight_distribution,
    weight_moments,
)
from .partition_core import Partition, hook_table, is_s_core, is_st_core, perimeter, straub_check

__all__ = [
    "DistinctCore", "IndicatorVector", "brute_force_st_cores", "enumerate_all",
    "enumerate_fixed_k", "fibonacci", "from_indicator", "to_indicator",
    "ExactMoments", "IntPolynomial", "SizeDistribution", "WeightDistribution",
    "exact_moments", "fixed_k_distribution", "fixed_k_moments", "g_s_polynomial",
    "gaussian_binomial", "mixture_distribution", "weight_distribution", "weight_moments",
    "Partition", "hook_table", "is_s_core", "is_st_core", "perimeter", "straub_check",
]
