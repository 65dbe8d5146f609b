"""Geometric slice schedules and the GBA / GSA policy families.

Slice boundaries are kept as exact rationals so that class membership
``tau_hat_p / alpha < o <= tau_hat_p`` never suffers a rounding ambiguity.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import floor

from ..analysis.formulas import max_parallelism
from ..errors import ParameterError
from ..model import Batch, Header, Instance, RoundView
from .sps import sps_starts


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        if "/" in x:
            return Fraction(x)
        return Fraction(x).limit_denominator(64)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(64)
    return Fraction(x)


@dataclass(frozen=True)
class GeometricConfig:
    alpha: Fraction
    ell: int
    beta: Fraction
    slice_hat: tuple[Fraction, ...]
    slice_int: tuple[int, ...]
    cap: int

    @property
    def phases(self) -> int:
        return len(self.slice_int)

    def class_of(self, o: int) -> int:
        """Index of the first phase whose rational boundary covers ``o``."""
        for p, bound in enumerate(self.slice_hat):
            if o <= bound:
                return p
        raise ParameterError(f"response length {o} exceeds the last slice {self.slice_hat[-1]}")


def geometric_config(s: int, M: int, alpha, beta_override=None) -> GeometricConfig:
    """Phase slice lengths ``beta * alpha**p`` up to the memory limit ``M - s``.

    Without an override, ``ell = floor(log_alpha(M - s))`` and ``beta`` is the
    unique value in ``[1, alpha)`` with ``beta * alpha**ell == M - s``. An
    override sets the first slice directly; boundaries past ``M - s`` are
    clipped so the final phase always fits any feasible job.
    """
    alpha = as_fraction(alpha)
    if alpha <= 1:
        raise ParameterError(f"alpha must be > 1, got {alpha}")
    cap = M - s
    if cap < 1:
        raise ParameterError(f"M - s must be >= 1, got {cap}")
    ell = 0
    power = Fraction(1)
    while power * alpha <= cap:
        power *= alpha
        ell += 1
    if beta_override is None:
        beta = cap / power
        hats = tuple(beta * alpha**p for p in range(ell + 1))
    else:
        beta = as_fraction(beta_override)
        if beta < 1:
            raise ParameterError(f"beta must be >= 1, got {beta}")
        hats_list = []
        x = beta
        while x < cap:
            hats_list.append(x)
            x *= alpha
        hats_list.append(Fraction(cap))
        hats = tuple(hats_list)
    return GeometricConfig(
        alpha=alpha,
        ell=ell,
        beta=beta,
        slice_hat=hats,
        slice_int=tuple(floor(h) for h in hats),
        cap=cap,
    )


class _ClassPipeline:
    """GBA baseline: class ``p`` runs as one staggered pipeline after class ``p-1``.

    Within a class jobs are ordered by ``(o, id)``. Empty classes take no time.
    """

    clairvoyant = True

    def __init__(self, alpha, beta_override=None):
        self.alpha = alpha
        self.beta_override = beta_override

    def bind(self, inst: Instance) -> None:
        s, M = inst.prompt_len, inst.memory_budget
        self.config = cfg = geometric_config(s, M, self.alpha, self.beta_override)
        classes: list[list[int]] = [[] for _ in range(cfg.phases)]
        for job in inst.jobs:
            classes[cfg.class_of(job.response_len)].append(job.id)
        lengths = inst.lengths
        self.classes = [sorted(c, key=lambda i: (lengths[i], i)) for c in classes]
        self.start = [0] * inst.n
        self.phase_starts = []
        t0 = 0
        for p, members in enumerate(self.classes):
            self.phase_starts.append(t0)
            if not members:
                continue
            tau = cfg.slice_int[p]
            k = max_parallelism(tau, s, M)
            offsets = sps_starts(len(members), k, tau)
            for i, off in zip(members, offsets):
                self.start[i] = t0 + off
            t0 += offsets[-1] + tau
        self.order = sorted(range(inst.n), key=lambda i: (self.start[i], i))
        self._next = 0
        self._running: set[int] = set()

    def decide(self, view: RoundView):
        t = view.t
        order = self.order
        while self._next < len(order) and self.start[order[self._next]] <= t:
            self._running.add(order[self._next])
            self._next += 1
        self._running -= view.finished
        return self._running


class GBA(_ClassPipeline):
    pass


class GSA:
    """Non-clairvoyant geometric slicing.

    Phase ``p`` runs a staggered pipeline over every unfinished job (ascending
    id) with slice ``tau_p``; runs still going at their slot end are killed.
    A phase ends when its last slot ends. A job killed at a slot end whose
    next slot opens in the same round restarts from zero.
    """

    clairvoyant = False

    def __init__(self, alpha, beta_override=None):
        self.alpha = alpha
        self.beta_override = beta_override

    def bind(self, header: Header) -> None:
        self.s, self.M = header.prompt_len, header.memory_budget
        self.config = geometric_config(self.s, self.M, self.alpha, self.beta_override)
        self.phase = -1
        self.phase_end = 0
        self.phase_log: list[tuple[int, int, int, int]] = []  # (start, tau, k, jobs)
        self.slots: list[tuple[int, int, int]] = []
        self._next = 0
        self.live: dict[int, int] = {}  # job -> end of its running slot
        self._ends: list[tuple[int, int]] = []  # lazy heap over live
        self.fresh: list[int] = []  # jobs whose slot opened this round

    def _open_phase(self, t: int, remaining: list[int]) -> None:
        cfg = self.config
        self.phase = min(self.phase + 1, cfg.phases - 1)
        tau = cfg.slice_int[self.phase]
        k = max_parallelism(tau, self.s, self.M)
        offsets = sps_starts(len(remaining), k, tau)
        self.slots = [(t + off, t + off + tau, i) for i, off in zip(remaining, offsets)]
        self._next = 0
        self.live = {}
        self._ends = []
        self.phase_end = t + offsets[-1] + tau
        self.phase_log.append((t, tau, k, len(remaining)))

    def pipeline_batch(self, view: RoundView) -> set[int]:
        t = view.t
        self.fresh = []
        if t >= self.phase_end:
            remaining = self.remaining(view)
            if not remaining:
                return set()
            self._open_phase(t, remaining)
        slots = self.slots
        while self._next < len(slots) and slots[self._next][0] <= t:
            start, end, i = slots[self._next]
            self.set_end(i, end)
            self.fresh.append(i)
            self._next += 1
        ends, live = self._ends, self.live
        while ends and ends[0][0] <= t:
            end, i = heapq.heappop(ends)
            if live.get(i) == end:
                del live[i]
        for i in [i for i in live if i in view.finished]:
            del live[i]
        return set(live)

    def set_end(self, i: int, end: int) -> None:
        self.live[i] = end
        heapq.heappush(self._ends, (end, i))

    def remaining(self, view: RoundView) -> list[int]:
        return view.unfinished()

    def decide(self, view: RoundView):
        batch = self.pipeline_batch(view)
        return Batch(batch, [i for i in self.fresh if i in view.active and i in batch])
