"""Problem instances, the round-by-round execution engine, and run metrics.

Time is discrete. In round ``t`` every job in the active batch ``B_t`` decodes
one token; a job with progress ``u`` occupies ``s + u + 1`` memory units while
active. A job that drops out of the batch before finishing is killed and its
progress is discarded. A killed job may be started again from zero in the very
round it was killed; policies express that with an explicit restart.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Protocol

from .errors import (
    ActivatedFinishedJob,
    EmptyInstance,
    IncompleteTimeline,
    InfeasibleJob,
    KVSchedError,
    MemoryViolation,
    NonPositiveBudget,
    NonTermination,
)


@dataclass(frozen=True)
class Job:
    id: int
    response_len: int


@dataclass(frozen=True)
class Instance:
    prompt_len: int
    memory_budget: int
    jobs: tuple[Job, ...]

    @classmethod
    def from_lengths(cls, prompt_len: int, memory_budget: int, lengths: Iterable[int]) -> "Instance":
        jobs = tuple(Job(i, int(o)) for i, o in enumerate(lengths))
        return cls(int(prompt_len), int(memory_budget), jobs)

    @property
    def n(self) -> int:
        return len(self.jobs)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(j.response_len for j in self.jobs)

    def header(self) -> "Header":
        return Header(self.n, self.prompt_len, self.memory_budget)

    def with_lengths(self, lengths: Iterable[int]) -> "Instance":
        return Instance.from_lengths(self.prompt_len, self.memory_budget, lengths)


@dataclass(frozen=True)
class Header:
    """What a non-clairvoyant policy is allowed to know up front."""

    n: int
    prompt_len: int
    memory_budget: int


def validate_instance(inst: Instance) -> Instance:
    if inst.memory_budget < 1:
        raise NonPositiveBudget(f"memory budget must be >= 1, got {inst.memory_budget}")
    if inst.n == 0:
        raise EmptyInstance("instance has no jobs")
    if inst.prompt_len < 0:
        raise KVSchedError(f"prompt length must be >= 0, got {inst.prompt_len}")
    for idx, job in enumerate(inst.jobs):
        if job.id != idx:
            raise KVSchedError(f"job at position {idx} has id {job.id}")
        if job.response_len < 1:
            raise InfeasibleJob(job.id, "response length must be >= 1")
        if inst.prompt_len + job.response_len > inst.memory_budget:
            raise InfeasibleJob(
                job.id, f"s + o = {inst.prompt_len + job.response_len} > M = {inst.memory_budget}"
            )
    return inst


@dataclass(frozen=True)
class Timeline:
    """Full execution record.

    ``rounds[t]`` is the sorted active batch of round ``t`` and ``progress[t]``
    holds the matching ``u_{i,t}`` values, position by position. Progress of
    inactive jobs is zero by construction (pausing is not representable), so
    only active entries are stored.
    """

    rounds: tuple[tuple[int, ...], ...]
    progress: tuple[tuple[int, ...], ...]
    completions: tuple[int | None, ...]
    kills: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return len(self.completions)

    @property
    def makespan(self) -> int:
        return len(self.rounds)

    def runs(self) -> list[tuple[int, int, int, bool]]:
        """Maximal contiguous executions as ``(job, start, end, completed)``.

        ``end`` is exclusive. A run that does not complete ended in a kill.
        """
        open_runs: dict[int, int] = {}
        out = []
        prev: set[int] = set()
        kills_at: dict[int, set[int]] = {}
        for r, i in self.kills:
            kills_at.setdefault(r, set()).add(i)
        for t, batch in enumerate(self.rounds):
            cur = set(batch)
            restarted = cur & prev & kills_at.get(t, set())
            for i in sorted((prev - cur) | restarted):
                out.append((i, open_runs.pop(i), t, self.completions[i] == t))
            for i in sorted((cur - prev) | restarted):
                open_runs[i] = t
            prev = cur
        end = len(self.rounds)
        for i in sorted(prev):
            out.append((i, open_runs.pop(i), end, self.completions[i] == end))
        out.sort(key=lambda r: (r[1], r[0]))
        return out


@dataclass(frozen=True)
class RunMetrics:
    total_flow_time: int
    mean_flow_time: Fraction
    kill_count: int
    peak_memory: int
    makespan: int
    per_round_memory: tuple[int, ...] = field(repr=False)


@dataclass
class RoundView:
    """Read-only state handed to a policy at the start of each round.

    ``progress`` is the engine's live list; policies must not mutate it.
    """

    t: int
    progress: list[int]
    finished: set[int]
    active: frozenset[int]
    n: int
    prompt_len: int
    memory_budget: int

    def unfinished(self) -> list[int]:
        return [i for i in range(self.n) if i not in self.finished]


class Batch(NamedTuple):
    """A decision that also restarts some continuing jobs from zero this round.

    Plain iterables of ids are accepted too; they mean no restarts.
    """

    active: Iterable[int]
    restarts: Iterable[int] = ()


class Policy(Protocol):
    clairvoyant: bool

    def bind(self, spec: Instance | Header) -> None: ...

    def decide(self, view: RoundView) -> Iterable[int] | Batch: ...


def default_horizon(inst: Instance) -> int:
    return 10 * sum(inst.lengths) + 10 * inst.n * inst.memory_budget


def simulate(inst: Instance, policy: Policy, horizon: int | None = None) -> Timeline:
    """Run ``policy`` on ``inst`` until every job completes.

    Starts and kills are inferred by diffing consecutive batches; a policy
    may also return a ``Batch`` naming continuing jobs to restart from zero,
    which records a kill in the same round. Any batch that breaks the memory
    budget or names a finished job is rejected.
    """
    validate_instance(inst)
    cap = default_horizon(inst) if horizon is None else horizon
    n, s, M = inst.n, inst.prompt_len, inst.memory_budget
    lengths = inst.lengths
    policy.bind(inst if getattr(policy, "clairvoyant", False) else inst.header())

    u = [0] * n
    finished: set[int] = set()
    completions: list[int | None] = [None] * n
    rounds: list[tuple[int, ...]] = []
    progress: list[tuple[int, ...]] = []
    kills: list[tuple[int, int]] = []
    prev: frozenset[int] = frozenset()
    view = RoundView(0, u, finished, prev, n, s, M)

    t = 0
    while len(finished) < n:
        if t >= cap:
            raise NonTermination(f"{n - len(finished)} jobs unfinished at horizon cap {cap}")
        view.t = t
        view.active = prev
        decision = policy.decide(view)
        if isinstance(decision, Batch):
            batch = tuple(sorted(set(decision.active)))
            restarts = set(decision.restarts)
        else:
            batch = tuple(sorted(set(decision)))
            restarts = set()
        cur = frozenset(batch)
        if restarts and not restarts <= (prev & cur):
            bad = sorted(restarts - (prev & cur))
            raise KVSchedError(f"round {t}: restart of jobs not continuing: {bad}")
        for i in sorted((prev - cur) | restarts):
            kills.append((t, i))
            u[i] = 0
        used = 0
        for i in batch:
            if not 0 <= i < n:
                raise KVSchedError(f"round {t}: unknown job id {i}")
            if i in finished:
                raise ActivatedFinishedJob(t, i)
            used += s + u[i] + 1
        if used > M:
            raise MemoryViolation(t, batch, used, M)
        rounds.append(batch)
        progress.append(tuple(u[i] for i in batch))
        done_now = []
        for i in batch:
            u[i] += 1
            if u[i] == lengths[i]:
                finished.add(i)
                completions[i] = t + 1
                done_now.append(i)
        prev = cur.difference(done_now) if done_now else cur
        t += 1

    return Timeline(tuple(rounds), tuple(progress), tuple(completions), tuple(kills))


def total_flow_time(tl: Timeline) -> int:
    missing = [i for i, c in enumerate(tl.completions) if c is None]
    if missing:
        raise IncompleteTimeline(f"jobs without completion: {missing[:10]}")
    return sum(tl.completions)  # type: ignore[arg-type]


def memory_profile(tl: Timeline, inst: Instance) -> list[int]:
    s = inst.prompt_len
    return [len(us) * (s + 1) + sum(us) for us in tl.progress]


def run_metrics(tl: Timeline, inst: Instance) -> RunMetrics:
    total = total_flow_time(tl)
    profile = memory_profile(tl, inst)
    return RunMetrics(
        total_flow_time=total,
        mean_flow_time=Fraction(total, tl.n),
        kill_count=len(tl.kills),
        peak_memory=max(profile, default=0),
        makespan=max(c for c in tl.completions if c is not None),
        per_round_memory=tuple(profile),
    )


@dataclass(frozen=True)
class Violation:
    kind: str
    round: int
    jobs: tuple[int, ...]
    detail: str = ""


def verify_feasibility(tl: Timeline, inst: Instance) -> list[Violation]:
    """Re-derive every timeline invariant from the raw record.

    Shares no state with the engine. Returns every violation found; an empty
    list means the timeline is feasible and complete.
    """
    out: list[Violation] = []
    n, s, M = inst.n, inst.prompt_len, inst.memory_budget
    lengths = inst.lengths
    if tl.n != n:
        out.append(Violation("shape", -1, (), f"timeline has {tl.n} jobs, instance has {n}"))
        return out
    if len(tl.rounds) != len(tl.progress):
        out.append(Violation("shape", -1, (), "rounds and progress lengths differ"))
        return out

    kills_by_round: dict[int, set[int]] = {}
    for r, i in tl.kills:
        kills_by_round.setdefault(r, set()).add(i)
    seen_complete: dict[int, int] = {}
    prev: dict[int, int] = {}

    def close_out(t: int, i: int, last_u: int, still_active: bool) -> None:
        if last_u + 1 == lengths[i]:
            if i in seen_complete:
                out.append(Violation("double completion", t, (i,)))
            seen_complete[i] = t
            if still_active:
                out.append(Violation("processing past completion", t, (i,)))
        elif not still_active and i not in kills_by_round.get(t, ()):
            out.append(Violation("unrecorded kill", t, (i,)))

    for t, (batch, us) in enumerate(zip(tl.rounds, tl.progress)):
        if len(batch) != len(us):
            out.append(Violation("shape", t, tuple(batch), "batch/progress length mismatch"))
            continue
        if len(set(batch)) != len(batch):
            out.append(Violation("duplicate id", t, tuple(batch)))
        cur = dict(zip(batch, us))
        bad_ids = [i for i in batch if not 0 <= i < n]
        if bad_ids:
            out.append(Violation("unknown job", t, tuple(bad_ids)))
            prev = {}
            continue
        killed_now = kills_by_round.get(t, set())
        for i, last_u in prev.items():
            restarted = i in cur and i in killed_now and last_u + 1 < lengths[i]
            close_out(t, i, last_u, i in cur and not restarted)
        for i in killed_now:
            if i not in prev or prev[i] + 1 == lengths[i]:
                out.append(Violation("spurious kill", t, (i,)))
        used = 0
        for i, u in cur.items():
            if i in seen_complete and seen_complete[i] <= t and i not in prev:
                out.append(Violation("activated finished job", t, (i,)))
            if not 0 <= u < lengths[i]:
                out.append(Violation("processing past completion", t, (i,), f"u={u} o={lengths[i]}"))
            expected = prev[i] + 1 if i in prev and i not in killed_now else 0
            if u != expected:
                out.append(
                    Violation("progress update broken", t, (i,), f"u={u}, expected {expected}")
                )
            used += s + u + 1
        if used > M:
            out.append(Violation("memory", t, tuple(batch), f"{used} > {M}"))
        prev = cur
    end = len(tl.rounds)
    for i, last_u in prev.items():
        if last_u + 1 == lengths[i]:
            seen_complete[i] = end
        else:
            out.append(Violation("unfinished at end", end, (i,)))

    for i in range(n):
        c = tl.completions[i]
        if i not in seen_complete:
            out.append(Violation("never completes", -1, (i,)))
        elif c != seen_complete[i]:
            out.append(Violation("completion mismatch", seen_complete[i], (i,), f"recorded {c}"))
    return out

