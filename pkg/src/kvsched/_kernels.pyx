# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same API and results as ``_kernels_py``."""
from libc.stdlib cimport malloc, calloc, free

BACKEND = "cython"


def static_profile(starts, lengths, long s, long size):
    cdef long i, d, r, st, o, n = len(starts)
    cdef long *prof = <long *> calloc(size if size > 0 else 1, sizeof(long))
    if prof == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            st = starts[i]
            o = lengths[i]
            for d in range(o):
                r = st + d
                if r >= size:
                    break
                prof[r] += s + d + 1
        return [prof[r] for r in range(size)]
    finally:
        free(prof)


cdef struct Search:
    long n
    long s
    long M
    long horizon
    long best
    long found
    long *lengths
    long *same
    long *rest
    long *follow
    long *cur
    long *best_starts
    long *prof


cdef void _dfs(Search *S, long j, long flow) noexcept nogil:
    cdef long o, lo, st, d, tail, fol
    cdef bint ok
    if j == S.n:
        if flow < S.best:
            S.best = flow
            S.found = 1
            for d in range(S.n):
                S.best_starts[d] = S.cur[d]
        return
    o = S.lengths[j]
    lo = S.cur[j - 1] if (j > 0 and S.same[j]) else 0
    tail = S.rest[j + 1]
    fol = S.follow[j]
    for st in range(lo, S.horizon + 1):
        if flow + st + o + tail + st * fol >= S.best:
            break
        ok = True
        for d in range(o):
            if S.prof[st + d] + S.s + d + 1 > S.M:
                ok = False
                break
        if not ok:
            continue
        for d in range(o):
            S.prof[st + d] += S.s + d + 1
        S.cur[j] = st
        _dfs(S, j + 1, flow + st + o)
        for d in range(o):
            S.prof[st + d] -= S.s + d + 1


def search_starts(lengths, same_as_prev, long s, long M, long horizon, long best):
    cdef long n = len(lengths)
    cdef long j, size, omax = 0
    cdef Search S
    for j in range(n):
        if lengths[j] > omax:
            omax = lengths[j]
    size = horizon + omax + 1
    S.n = n
    S.s = s
    S.M = M
    S.horizon = horizon
    S.best = best
    S.found = 0
    S.lengths = <long *> malloc(n * sizeof(long))
    S.same = <long *> malloc(n * sizeof(long))
    S.rest = <long *> calloc(n + 1, sizeof(long))
    S.follow = <long *> calloc(n, sizeof(long))
    S.cur = <long *> calloc(n, sizeof(long))
    S.best_starts = <long *> calloc(n, sizeof(long))
    S.prof = <long *> calloc(size, sizeof(long))
    try:
        if (S.lengths == NULL or S.same == NULL or S.rest == NULL or S.follow == NULL
                or S.cur == NULL or S.best_starts == NULL or S.prof == NULL):
            raise MemoryError()
        for j in range(n):
            S.lengths[j] = lengths[j]
            S.same[j] = 1 if same_as_prev[j] else 0
        for j in range(n - 1, -1, -1):
            S.rest[j] = S.rest[j + 1] + S.lengths[j]
        for j in range(n - 2, -1, -1):
            S.follow[j] = S.follow[j + 1] + 1 if S.same[j + 1] else 0
        with nogil:
            _dfs(&S, 0, 0)
        starts = [S.best_starts[j] for j in range(n)] if S.found else None
        return S.best, starts
    finally:
        free(S.lengths)
        free(S.same)
        free(S.rest)
        free(S.follow)
        free(S.cur)
        free(S.best_starts)
        free(S.prof)
