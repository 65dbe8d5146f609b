"""Exception hierarchy shared by every module in the package."""


class KVSchedError(Exception):
    """Base class; the CLI prints ``type(err).__name__`` on any of these."""


class InfeasibleJob(KVSchedError):
    def __init__(self, job_id: int, detail: str = ""):
        self.job_id = job_id
        super().__init__(f"job {job_id} infeasible{': ' + detail if detail else ''}")


class EmptyInstance(KVSchedError):
    pass


class NonPositiveBudget(KVSchedError):
    pass


class MemoryViolation(KVSchedError):
    def __init__(self, t: int, batch, used: int, budget: int):
        self.t = t
        self.batch = tuple(batch)
        self.used = used
        super().__init__(f"round {t}: batch {list(self.batch)} uses {used} > M={budget}")


class ActivatedFinishedJob(KVSchedError):
    def __init__(self, t: int, job_id: int):
        self.t = t
        self.job_id = job_id
        super().__init__(f"round {t}: job {job_id} is already finished")


class NonTermination(KVSchedError):
    pass


class IncompleteTimeline(KVSchedError):
    pass


class NonIdenticalJobs(KVSchedError):
    pass


class PreemptiveTimeline(KVSchedError):
    pass


class Infeasible(KVSchedError):
    pass


class GuardRail(KVSchedError):
    pass


class ParameterError(KVSchedError):
    pass


class ParseError(KVSchedError):
    def __init__(self, line: int, text: str):
        self.line = line
        super().__init__(f"line {line}: cannot parse {text!r}")


class AllRecordsInfeasible(KVSchedError):
    pass
