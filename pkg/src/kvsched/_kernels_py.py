"""Pure-Python kernels; the compiled module ``_kernels`` mirrors this API exactly."""
from __future__ import annotations

BACKEND = "python"


def static_profile(starts, lengths, s, size):
    """Per-round memory of non-preemptive runs ``[start, start + o)`` over rounds ``0..size-1``."""
    prof = [0] * size
    for st, o in zip(starts, lengths):
        for d in range(o):
            r = st + d
            if r >= size:
                break
            prof[r] += s + d + 1
    return prof


def search_starts(lengths, same_as_prev, s, M, horizon, best):
    """Depth-first branch and bound over non-preemptive start times.

    ``lengths`` is the job order to assign; ``same_as_prev[j]`` forces job
    ``j`` to start no earlier than job ``j-1`` (symmetry breaking among equal
    lengths). ``best`` is an exclusive upper bound on the flow to beat.
    Returns ``(flow, starts)``; ``starts`` is None when nothing beats ``best``.
    """
    n = len(lengths)
    size = horizon + max(lengths) + 1
    prof = [0] * size
    rest = [0] * (n + 1)
    for j in range(n - 1, -1, -1):
        rest[j] = rest[j + 1] + lengths[j]
    # run_after[j]: how many later jobs must start no earlier than job j
    run_after = [0] * n
    for j in range(n - 2, -1, -1):
        run_after[j] = run_after[j + 1] + 1 if same_as_prev[j + 1] else 0
    cur = [0] * n
    found = [None]
    best_box = [best]

    def dfs(j, flow):
        if j == n:
            if flow < best_box[0]:
                best_box[0] = flow
                found[0] = list(cur)
            return
        o = lengths[j]
        lo = cur[j - 1] if j > 0 and same_as_prev[j] else 0
        tail = rest[j + 1]
        follow = run_after[j]
        for st in range(lo, horizon + 1):
            if flow + st + o + tail + st * follow >= best_box[0]:
                break
            ok = True
            for d in range(o):
                if prof[st + d] + s + d + 1 > M:
                    ok = False
                    break
            if not ok:
                continue
            for d in range(o):
                prof[st + d] += s + d + 1
            cur[j] = st
            dfs(j + 1, flow + st + o)
            for d in range(o):
                prof[st + d] -= s + d + 1

    dfs(0, 0)
    return best_box[0], found[0]
