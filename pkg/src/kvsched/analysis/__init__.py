"""Closed forms, bounds on the optimum, and the exact tiny-instance oracle."""
from .bounds import (
    BoundReport,
    PhaseStats,
    ceiling_inequality_holds,
    opt_lb_multiclass,
    opt_lb_single,
    phase_diagnostics,
    theorem_bound,
)
from .formulas import area, max_parallelism, parallelism_floor, peak_memory
from .oracle import brute_force_opt, spacing_check, start_times

__all__ = [
    "BoundReport", "PhaseStats", "area", "brute_force_opt", "ceiling_inequality_holds",
    "max_parallelism", "opt_lb_multiclass", "opt_lb_single", "parallelism_floor",
    "peak_memory", "phase_diagnostics", "spacing_check", "start_times", "theorem_bound",
]
