"""Staggered pipelines, simultaneous batching, and fixed start-time schedules."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..analysis.formulas import max_parallelism
from ..errors import NonIdenticalJobs, ParameterError
from ..model import Batch, Header, Instance, RoundView


def sps_starts(count: int, k: int, tau: int) -> list[int]:
    return [j * tau // k for j in range(count)]


@dataclass(frozen=True)
class SpsPlan:
    parallelism: int
    slice_len: int
    slots: tuple[tuple[int, int, int], ...]  # (job id, start, end)

    @property
    def starts(self) -> list[int]:
        return [s for _, s, _ in self.slots]


def sps_plan(job_ids: Sequence[int], k: int, tau: int) -> SpsPlan:
    if k < 1 or tau < 1:
        raise ParameterError("k and tau must be >= 1")
    starts = sps_starts(len(job_ids), k, tau)
    return SpsPlan(k, tau, tuple((i, st, st + tau) for i, st in zip(job_ids, starts)))


class WindowPolicy:
    """Runs job ``i`` during ``[start, end)`` of each of its windows until it finishes.

    A run cut off by its window end is a kill. A window opening in the round
    another window of the same job closes restarts the job from zero. Needs no
    response lengths.
    """

    clairvoyant = False

    def __init__(self, windows: Sequence[tuple[int, int, int]]):
        self.windows = sorted(windows, key=lambda w: (w[1], w[0]))

    def bind(self, spec) -> None:
        self._next = 0
        self._live: dict[int, int] = {}

    def decide(self, view: RoundView):
        t = view.t
        w = self.windows
        fresh = []
        while self._next < len(w) and w[self._next][1] <= t:
            i, _, end = w[self._next]
            self._live[i] = end
            fresh.append(i)
            self._next += 1
        for i in [i for i, end in self._live.items() if end <= t or i in view.finished]:
            del self._live[i]
        restarts = [i for i in fresh if i in view.active and i in self._live]
        return Batch(list(self._live), restarts)


class SPS(WindowPolicy):
    """Staggered pipeline over all jobs in id order.

    Defaults: ``tau`` = the longest job (clairvoyant default only), ``k`` =
    the largest memory-feasible parallelism for that slice.
    """

    def __init__(self, k: int | None = None, tau: int | None = None):
        self.k = k
        self.tau = tau

    def bind(self, spec) -> None:
        n = spec.n
        tau = self.tau
        if tau is None:
            if not isinstance(spec, Instance):
                raise ParameterError("sps needs an explicit tau")
            tau = max(spec.lengths)
        k = self.k if self.k is not None else max_parallelism(tau, spec.prompt_len, spec.memory_budget)
        self.plan = sps_plan(range(n), k, tau)
        super().__init__(self.plan.slots)
        super().bind(spec)

    @property
    def clairvoyant(self) -> bool:  # type: ignore[override]
        return self.tau is None


class StartTimes(WindowPolicy):
    """Non-preemptive schedule from explicit start times; each job runs to completion."""

    def __init__(self, starts: Sequence[int]):
        far = 1 << 62
        super().__init__([(i, st, far) for i, st in enumerate(starts)])
        self.starts = list(starts)


class SimS(WindowPolicy):
    """Simultaneous batches of ``floor(M / (s + o))`` identical jobs, back to back."""

    clairvoyant = True

    def __init__(self):
        pass

    def bind(self, inst: Instance) -> None:
        lengths = set(inst.lengths)
        if len(lengths) != 1:
            raise NonIdenticalJobs(f"SimS needs identical jobs, got lengths {sorted(lengths)[:5]}")
        (o,) = lengths
        batch = inst.memory_budget // (inst.prompt_len + o)
        self.batch_size = batch
        far = 1 << 62
        super().__init__([(i, (i // batch) * o, far) for i in range(inst.n)])
        super().bind(inst)


def check_identical(inst: Instance | Header) -> int:
    if not isinstance(inst, Instance):
        raise ParameterError("identical-job check needs the full instance")
    lengths = set(inst.lengths)
    if len(lengths) != 1:
        raise NonIdenticalJobs(f"expected identical jobs, got lengths {sorted(lengths)[:5]}")
    return lengths.pop()
