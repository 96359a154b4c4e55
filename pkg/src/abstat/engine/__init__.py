"""Diagnostic series, verdicts and invariant checks."""

from .distribution import check_continuity, cdf_density_series, continuity_grid, stat_lim_inf, stat_lim_sup
from .export import CSV_HEADER, dumps, to_csv, write_csv
from .invariants import CHECKS, InvariantReport, Violation, run_grid
from .report import ModeReport, compare_modes
from .series import (
    ENUM_LIMIT,
    DiagnosticSeries,
    OrderParams,
    WindowRecord,
    cesaro_series,
    density_series,
    level_series,
    moment_series,
    real_stat_density,
)
from .verdict import TAIL_FRACTION, TAU, Verdict, combine, decide, verdict

__all__ = [
    "CHECKS", "CSV_HEADER", "DiagnosticSeries", "ENUM_LIMIT", "InvariantReport", "ModeReport", "OrderParams",
    "TAIL_FRACTION", "TAU", "Verdict", "Violation", "WindowRecord", "cdf_density_series", "cesaro_series",
    "check_continuity", "combine", "compare_modes", "continuity_grid", "decide", "density_series", "dumps",
    "level_series", "moment_series", "real_stat_density", "run_grid", "stat_lim_inf", "stat_lim_sup", "to_csv",
    "verdict", "write_csv",
]
