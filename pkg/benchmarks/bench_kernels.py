"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
from __future__ import annotations

import argparse
import random
import time

from kvsched import _kernels_py

try:
    from kvsched import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    rng = random.Random(7)
    n = 2000
    starts = [rng.randint(0, 5000) for _ in range(n)]
    lengths = [rng.randint(1, 400) for _ in range(n)]
    yield "static_profile n=2000", lambda m: m.static_profile(starts, lengths, 79, 6000)

    for lens, s, M in (([6] * 8, 1, 20), ([3, 4, 5, 6, 7, 8, 8, 8], 1, 24), ([8] * 8, 2, 30)):
        same = [i > 0 and lens[i] == lens[i - 1] for i in range(len(lens))]
        yield (f"search_starts o={lens[0]}..{lens[-1]} M={M}",
               lambda m, lens=lens, same=same, s=s, M=M: m.search_starts(lens, same, s, M, 64, 10**6))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled backend not built; run `pip install -e . --no-build-isolation`")
        return 1
    print(f"{'kernel':<28}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, fn in cases():
        assert fn(_kernels_py) == fn(_kernels), name
        py = best_of(lambda: fn(_kernels_py), args.repeat)
        cy = best_of(lambda: fn(_kernels), args.repeat)
        print(f"{name:<28}{py:>12.4f}{cy:>12.4f}{py / cy:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
