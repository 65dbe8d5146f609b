"""Exact optimum for tiny instances, and the spacing condition for identical jobs."""
from __future__ import annotations

from ..errors import GuardRail, Infeasible, NonIdenticalJobs, PreemptiveTimeline
from ..kernels import search_starts
from ..model import Instance, Timeline, validate_instance
from .formulas import max_parallelism

MAX_JOBS = 8
MAX_HORIZON = 64


def brute_force_opt(inst: Instance, horizon: int | None = None) -> tuple[int, list[int]]:
    """Minimum total flow over non-preemptive schedules with starts in ``[0, horizon]``.

    Restricting to start times loses nothing, since an optimal schedule never
    needs to pause or preempt. Jobs of equal length are interchangeable, so
    their starts are forced to be non-decreasing in id order. The default
    horizon ``sum(o)`` admits running every job back to back.
    """
    validate_instance(inst)
    lengths = inst.lengths
    n = inst.n
    if horizon is None:
        horizon = sum(lengths)
    if n > MAX_JOBS:
        raise GuardRail(f"brute force limited to n <= {MAX_JOBS}, got {n}")
    if horizon > MAX_HORIZON:
        raise GuardRail(f"brute force limited to horizon <= {MAX_HORIZON}, got {horizon}")
    if horizon < 0:
        raise GuardRail("horizon must be >= 0")

    order = sorted(range(n), key=lambda i: (lengths[i], i))
    ordered = [lengths[i] for i in order]
    same = [j > 0 and ordered[j] == ordered[j - 1] for j in range(n)]

    # back-to-back in order is always feasible; seeds the bound when it fits
    bound = 1 + sum(lengths) * n + horizon * n
    seq_starts, t = [], 0
    for o in ordered:
        seq_starts.append(t)
        t += o
    if seq_starts[-1] <= horizon:
        bound = sum(st + o for st, o in zip(seq_starts, ordered))
        flow, found = search_starts(ordered, same, inst.prompt_len, inst.memory_budget, horizon, bound)
        if found is None:
            found = seq_starts
    else:
        flow, found = search_starts(ordered, same, inst.prompt_len, inst.memory_budget, horizon, bound)
        if found is None:
            raise Infeasible(f"no feasible schedule starts every job by round {horizon}")
    starts = [0] * n
    for pos, i in enumerate(order):
        starts[i] = found[pos]
    return flow, starts


def start_times(tl: Timeline) -> list[int]:
    """Start round of every job in a kill-free timeline."""
    if tl.kills:
        raise PreemptiveTimeline(f"timeline has {len(tl.kills)} kills")
    starts: list[int | None] = [None] * tl.n
    for i, st, _, _ in tl.runs():
        if starts[i] is not None:
            raise PreemptiveTimeline(f"job {i} runs more than once")
        starts[i] = st
    if any(st is None for st in starts):
        raise PreemptiveTimeline("some job never runs")
    return starts  # type: ignore[return-value]


def spacing_check(tl: Timeline, inst: Instance) -> bool:
    """Do sorted starts satisfy ``S[i+k] - S[i] >= ceil(tau / 2)`` with ``k = k*(tau)``?

    Every feasible schedule of identical jobs must; a ``False`` on a feasible
    timeline would contradict the spacing argument.
    """
    lengths = set(inst.lengths)
    if len(lengths) != 1:
        raise NonIdenticalJobs(f"spacing check needs identical jobs, got {sorted(lengths)[:5]}")
    (tau,) = lengths
    starts = sorted(start_times(tl))
    k = max_parallelism(tau, inst.prompt_len, inst.memory_budget)
    gap = -(-tau // 2)
    return all(starts[i + k] - starts[i] >= gap for i in range(len(starts) - k))
