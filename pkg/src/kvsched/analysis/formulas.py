"""Closed forms for staggered pipelines: peak memory, parallelism, memory-time area."""
from __future__ import annotations

from fractions import Fraction
from math import gcd

from ..errors import Infeasible


def peak_memory(k: int, tau: int, s: int) -> int:
    """Steady-state peak memory of a staggered pipeline with ``k`` slots of length ``tau``.

    Attained at every round ``q*tau - 1`` (``q >= 1``) once the pipeline is full.
    """
    if k < 1 or tau < 1:
        raise ValueError("k and tau must be >= 1")
    twice = tau * k + tau + k - gcd(tau, k)
    return s * k + twice // 2


def max_parallelism(tau: int, s: int, M: int) -> int:
    """Largest ``k`` whose staggered pipeline fits in ``M``.

    Peak memory strictly increases with ``k`` (by at least ``s + 1`` per step),
    so an exponential probe followed by bisection finds the boundary.
    """
    if s + tau > M:
        raise Infeasible(f"s + tau = {s + tau} > M = {M}")
    lo, hi = 1, 2
    while peak_memory(hi, tau, s) <= M:
        lo, hi = hi, hi * 2
    # invariant: peak(lo) <= M < peak(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if peak_memory(mid, tau, s) <= M:
            lo = mid
        else:
            hi = mid
    return lo


def parallelism_floor(tau: int, s: int, M: int) -> int:
    return (2 * M - tau + 1) // (2 * s + tau + 1)


def area(o, s) -> int | Fraction:
    """Memory-time area ``s*o + o(o+1)/2``; exact for rational ``o`` too."""
    if isinstance(o, int) and isinstance(s, int):
        return s * o + o * (o + 1) // 2
    o = Fraction(o)
    return s * o + o * (o + 1) / 2
