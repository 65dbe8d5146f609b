"""Batch scheduling of LLM inference jobs under a KV-cache memory budget."""
from .errors import KVSchedError
from .model import (
    Batch,
    Instance,
    Job,
    RoundView,
    RunMetrics,
    Timeline,
    Violation,
    memory_profile,
    run_metrics,
    simulate,
    total_flow_time,
    validate_instance,
    verify_feasibility,
)
from .schedulers import POLICY_NAMES, PolicyParams, make_policy, run_policy

__version__ = "0.1.0"

__all__ = [
    "Batch", "Instance", "Job", "KVSchedError", "POLICY_NAMES", "PolicyParams", "RoundView",
    "RunMetrics", "Timeline", "Violation", "make_policy", "memory_profile", "run_metrics",
    "run_policy", "simulate", "total_flow_time", "validate_instance", "verify_feasibility",
]
