"""Work-conserving variants of GBA and GSA.

Both keep their parent's schedule intact and only put otherwise idle memory
to use, so no job finishes later than under the parent policy.
"""
from __future__ import annotations

import heapq

import numpy as np

from ..model import Batch, Header, Instance, RoundView
from .geometric import GSA, _ClassPipeline


def _ramp_profile(starts, lengths, size: int, s: int) -> np.ndarray:
    """Memory per round of runs ``[start, start + length)`` growing by one unit per round."""
    cnt = np.zeros(size + 1, dtype=np.int64)
    ssum = np.zeros(size + 1, dtype=np.int64)
    starts = np.asarray(starts, dtype=np.int64)
    ends = starts + np.asarray(lengths, dtype=np.int64)
    np.add.at(cnt, starts, 1)
    np.add.at(cnt, ends, -1)
    np.add.at(ssum, starts, starts)
    np.add.at(ssum, ends, -starts)
    cnt = np.cumsum(cnt)[:size]
    ssum = np.cumsum(ssum)[:size]
    r = np.arange(size, dtype=np.int64)
    return cnt * (s + 1 + r) - ssum


class GBAD(_ClassPipeline):
    """GBA with dynamic refill.

    The GBA start times form a committed baseline. Each round, while the
    shortest job that has not started yet can run to completion from now
    without pushing baseline-plus-refill memory past ``M`` in any future
    round, it starts immediately. By default the baseline slot it leaves
    behind stays reserved and idle; ``reuse_slots=True`` hands that memory
    back to later refills instead.
    """

    def __init__(self, alpha, beta_override=None, reuse_slots: bool = False):
        super().__init__(alpha, beta_override)
        self.reuse_slots = reuse_slots

    def bind(self, inst: Instance) -> None:
        super().bind(inst)
        s = inst.prompt_len
        self.M = inst.memory_budget
        lengths = inst.lengths
        size = max(st + o for st, o in zip(self.start, lengths)) + 1
        self._base = _ramp_profile(self.start, lengths, size, s)
        self._refill = np.zeros(size, dtype=np.int64)
        self._ramp = s + 1 + np.arange(max(lengths), dtype=np.int64)
        self.lengths = lengths
        self.refilled: set[int] = set()
        self._queue = sorted(range(inst.n), key=lambda i: (lengths[i], i))
        self._head = 0

    def decide(self, view: RoundView):
        t = view.t
        order = self.order
        while self._next < len(order) and self.start[order[self._next]] <= t:
            i = order[self._next]
            if i not in self.refilled:
                self._running.add(i)
            self._next += 1
        self._running -= view.finished

        queue, M = self._queue, self.M
        while self._head < len(queue):
            i = queue[self._head]
            if i in self.refilled or self.start[i] <= t:
                self._head += 1
                continue
            o = self.lengths[i]
            st = self.start[i]
            if self.reuse_slots:
                self._base[st:st + o] -= self._ramp[:o]
            window = self._base[t:t + o] + self._refill[t:t + o] + self._ramp[:o]
            if window.max() > M:
                if self.reuse_slots:
                    self._base[st:st + o] += self._ramp[:o]
                break
            self._refill[t:t + o] += self._ramp[:o]
            self.refilled.add(i)
            self._running.add(i)
            self._head += 1
        return self._running


class GSASpec(GSA):
    """GSA with speculative execution in memory the pipeline leaves free.

    The GSA pipeline runs unchanged over every unfinished job. Spare memory
    each round starts speculative runs of idle jobs in ascending id order,
    stopping at the first that does not fit. Speculative runs never slow the
    pipeline: if the pipeline needs the memory, speculative runs are killed
    newest first. When a job's pipeline slot opens while it runs
    speculatively, the run is kept and counted as the slot's run if the
    worst-case phase plan still fits with its head start; otherwise it
    restarts from zero in the slot. A job already past the slice length
    cannot finish in that slot, so the slot is left idle and the speculative
    run continues.
    """

    def bind(self, header: Header) -> None:
        super().bind(header)
        self.spec: dict[int, int] = {}  # job -> round its speculative run started
        self._idle = list(range(header.n))  # min-heap of candidate ids, lazily validated
        self._plan = np.zeros(0, dtype=np.int64)
        self._plan_t0 = 0
        self.promotions = 0
        self.spec_kills = 0

    def _open_phase(self, t: int, remaining: list[int]) -> None:
        super()._open_phase(t, remaining)
        tau = self.config.slice_int[self.phase]
        starts = [st - t for st, _, _ in self.slots]
        self._plan = _ramp_profile(starts, [tau] * len(starts), self.phase_end - t, self.s)
        self._plan_t0 = t

    def _drop_from_plan(self, start: int, tau: int, keep: int) -> None:
        """Remove slot rounds ``[start + keep, start + tau)`` from the worst-case plan."""
        a = start - self._plan_t0
        d = np.arange(keep, tau, dtype=np.int64)
        self._plan[a + keep:a + tau] -= self.s + 1 + d

    def decide(self, view: RoundView):
        t, u, s, M = view.t, view.progress, self.s, self.M
        for i in [i for i in self.spec if i in view.finished]:
            del self.spec[i]
        pipe = self.pipeline_batch(view)
        tau = self.config.slice_int[self.phase] if self.phase >= 0 else 0
        restarts = set(i for i in self.fresh if i in view.active and i in pipe)

        for i in self.fresh:
            if i not in self.spec or i not in pipe:
                continue
            u0 = u[i]
            if u0 >= tau:
                # cannot finish in this slot: give the slot back, keep speculating
                del self.live[i]
                pipe.discard(i)
                restarts.discard(i)
                self._drop_from_plan(t, tau, 0)
                continue
            del self.spec[i]
            a = t - self._plan_t0
            if (self._plan[a:a + tau - u0] + u0).max() <= M:
                self._plan[a:a + tau - u0] += u0
                self._drop_from_plan(t, tau, tau - u0)
                self.set_end(i, t + tau - u0)
                restarts.discard(i)
                self.promotions += 1

        used = sum(s + (0 if i in restarts else u[i]) + 1 for i in pipe)
        spec = self.spec
        used += sum(s + u[j] + 1 for j in spec)
        if used > M:
            for i in sorted(spec, key=lambda i: (spec[i], i), reverse=True):
                del spec[i]
                used -= s + u[i] + 1
                self.spec_kills += 1
                if used <= M:
                    break

        idle = self._idle
        deferred = []
        while idle and used + s + 1 <= M:
            i = heapq.heappop(idle)
            if i in view.finished or i in pipe or i in spec:
                continue
            if i in view.active:
                deferred.append(i)  # killed this round; eligible again next round
                continue
            spec[i] = t
            used += s + 1
        for i in deferred:
            heapq.heappush(idle, i)
        for i in view.active:
            if i not in pipe and i not in spec and i not in view.finished:
                heapq.heappush(idle, i)
        return Batch(pipe | spec.keys(), restarts)
