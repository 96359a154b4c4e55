"""Window-density (alpha-beta statistical) convergence diagnostics of order gamma
for sequences of random variables."""

from .distributions import DiscreteDistribution, JointDistribution
from .engine import (
    DiagnosticSeries,
    OrderParams,
    Verdict,
    cdf_density_series,
    cesaro_series,
    compare_modes,
    density_series,
    moment_series,
    real_stat_density,
    stat_lim_inf,
    stat_lim_sup,
    verdict,
)
from .models import Branch, RVSequenceModel, combine_linear
from .windows import Window, WindowScheme, construct_slow_ratio_blocks, liminf_ratio, make_scheme

__version__ = "0.1.0"

__all__ = [
    "Branch", "DiagnosticSeries", "DiscreteDistribution", "JointDistribution", "OrderParams", "RVSequenceModel",
    "Verdict", "Window", "WindowScheme", "cdf_density_series", "cesaro_series", "combine_linear", "compare_modes",
    "construct_slow_ratio_blocks", "density_series", "liminf_ratio", "make_scheme", "moment_series",
    "real_stat_density", "stat_lim_inf", "stat_lim_sup", "verdict",
]
