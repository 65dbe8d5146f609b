"""Baseline schedulers: MC-SF (clairvoyant), A-Min and vLLM-style FCFS (non-clairvoyant)."""
from __future__ import annotations

import heapq
import random

from ..model import Batch, Header, Instance, RoundView


def projected_peak(entries: list[tuple[int, int]], s: int) -> int:
    """Max future memory if every ``(progress, remaining)`` run continues to completion.

    Between completions memory only grows, so the maximum sits on some run's
    final round ``d = remaining - 1``.
    """
    if not entries:
        return 0
    order = sorted(entries, key=lambda e: e[1], reverse=True)
    best = 0
    base = 0  # sum of (s + u + 1) over runs still alive at offset d
    count = 0
    for u, rem in order:
        base += s + u + 1
        count += 1
        best = max(best, base + count * (rem - 1))
    return best


class MCSF:
    """Memory-constrained shortest-first.

    Jobs queue in ascending ``(o, id)``. Each round the queue head is admitted
    while running all admitted jobs to completion, with no further admissions,
    stays within ``M`` at every future round. Never kills.
    """

    clairvoyant = True

    def bind(self, inst: Instance) -> None:
        self.s, self.M = inst.prompt_len, inst.memory_budget
        self.lengths = inst.lengths
        self.queue = sorted(range(inst.n), key=lambda i: (self.lengths[i], i))
        self._head = 0
        self._running: set[int] = set()

    def decide(self, view: RoundView):
        self._running -= view.finished
        u = view.progress
        entries = [(u[i], self.lengths[i] - u[i]) for i in self._running]
        while self._head < len(self.queue):
            cand = self.queue[self._head]
            trial = entries + [(0, self.lengths[cand])]
            if projected_peak(trial, self.s) > self.M:
                break
            entries = trial
            self._running.add(cand)
            self._head += 1
        return self._running


class AMin:
    """Estimate-driven admission and eviction without access to response lengths.

    The estimate for job ``i`` is one more than the largest progress ever seen
    for it, a certified lower bound on ``o_i``. Waiting jobs are admitted by
    ascending estimate; on overflow the active job with the smallest estimate
    is killed first. Ties break on draws from a generator seeded with ``seed``.

    Ranking victims by estimate minus progress instead would always pick a job
    running past its previous best, since its estimated remainder is 1; two
    long jobs then kill each other forever. A killed job rejoins the
    waiting heap at once and, if readmitted in the same round, restarts from zero.
    """

    clairvoyant = False

    def __init__(self, seed: int = 0):
        self.seed = seed

    def bind(self, header: Header) -> None:
        self.s, self.M = header.prompt_len, header.memory_budget
        self.rng = random.Random(self.seed)
        self.estimate = [1] * header.n
        self.waiting = [(1, self.rng.random(), i) for i in range(header.n)]
        heapq.heapify(self.waiting)
        self._running: set[int] = set()

    def decide(self, view: RoundView):
        s, M, u = self.s, self.M, view.progress
        running = self._running
        running -= view.finished
        est = self.estimate
        for i in running:
            if u[i] + 1 > est[i]:
                est[i] = u[i] + 1
        used = sum(s + u[i] + 1 for i in running)
        killed = set()
        if used > M:
            victims = sorted(running, key=lambda i: (est[i], self.rng.random()))
            for i in victims:
                if used <= M:
                    break
                used -= s + u[i] + 1
                running.discard(i)
                killed.add(i)
        waiting = self.waiting
        for i in sorted(killed):
            heapq.heappush(waiting, (est[i], self.rng.random(), i))
        while waiting and used + s + 1 <= M:
            _, _, i = heapq.heappop(waiting)
            running.add(i)
            used += s + 1
        return Batch(running, killed & running)


class VLLM:
    """First-come-first-served admission with newest-first eviction.

    Continuing jobs that no longer fit are evicted from the highest id down and
    rejoin the queue in id order. Then the queue head is admitted while the
    round's memory fits; an evicted job readmitted this way restarts from zero.
    """

    clairvoyant = False

    def bind(self, header: Header) -> None:
        self.s, self.M = header.prompt_len, header.memory_budget
        self.queue = list(range(header.n))
        heapq.heapify(self.queue)
        self._running: set[int] = set()

    def decide(self, view: RoundView):
        s, M, u = self.s, self.M, view.progress
        running = self._running
        running -= view.finished
        used = sum(s + u[i] + 1 for i in running)
        evicted = []
        if used > M:
            for i in sorted(running, reverse=True):
                if used <= M:
                    break
                used -= s + u[i] + 1
                running.discard(i)
                evicted.append(i)
        queue = self.queue
        for i in evicted:
            heapq.heappush(queue, i)
        while queue and used + s + 1 <= M:
            running.add(heapq.heappop(queue))
            used += s + 1
        return Batch(running, [i for i in evicted if i in running])
