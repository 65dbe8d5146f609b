"""Acceptance gate: one PASS/FAIL line per criterion.

Run directly (``python3 tests/test_acceptance.py``) for the summary lines, or
through pytest, where each criterion is a test and the lines are repeated in
the terminal summary.
"""
from __future__ import annotations

import statistics
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from kvsched.analysis import (
    brute_force_opt,
    opt_lb_multiclass,
    opt_lb_single,
    theorem_bound,
)
from kvsched.model import total_flow_time, verify_feasibility
from kvsched.schedulers import a_min, gba, gba_d, gsa, gsa_spec, mc_sf, sims, sps, vllm_fcfs
from kvsched.suites import ceiling_suite, feasibility_suite, formulas_suite, lemmas_suite, tiny_instances
from kvsched.workloads import (
    gen_identical,
    gen_long_job_trap,
    gen_two_point,
    load_trace,
    long_job_trap_gsa_bound,
    long_job_trap_opt,
    round_pow2,
)

TRACE = Path(__file__).parent / "fixtures" / "trace_1000.txt"
ALPHAS = (Fraction(4, 3), Fraction(3, 2), Fraction(2))
LINES: list[str] = []


def within(value, target, tol):
    return abs(value - target) <= tol * target


def report(num: int, title: str, ok: bool, detail: str, elapsed: float, limit: float) -> bool:
    fast = elapsed < limit
    passed = ok and fast
    timing = f"{elapsed:.2f}s < {limit:g}s" if fast else f"{elapsed:.2f}s >= {limit:g}s (too slow)"
    line = f"[{'PASS' if passed else 'FAIL'}] {num:>2}. {title}: {detail} ({timing})"
    LINES.append(line)
    print(line, flush=True)
    return passed


def criterion_1() -> bool:
    t0 = time.perf_counter()
    inst = gen_identical(15, 0, 5, 15)
    f_sps = total_flow_time(sps(inst, 5, 5))
    f_sims = total_flow_time(sims(inst))
    return report(1, "worked example", f_sps == 180 and f_sims == 225,
                  f"SPS {f_sps} (want 180), SimS {f_sims} (want 225)", time.perf_counter() - t0, 1)


def criterion_2() -> bool:
    t0 = time.perf_counter()
    inst = gen_identical(200, 0, 16, 256)
    f_mc = total_flow_time(mc_sf(inst))
    t_mc = time.perf_counter() - t0
    t1 = time.perf_counter()
    f_gba = total_flow_time(gba(inst, 2))
    t_gba = time.perf_counter() - t1
    ok = within(f_mc, 21632, 0.01) and within(f_gba, 14083, 0.01)
    return report(2, "uniform instance", ok,
                  f"MC-SF {f_mc} (want 21632), GBA {f_gba} (want 14083)", max(t_mc, t_gba), 1)


def criterion_3() -> bool:
    t0 = time.perf_counter()
    inst = gen_two_point(194, 1, 6, 160, 96, 256)
    f_vllm = total_flow_time(vllm_fcfs(inst))
    f_gsa = total_flow_time(gsa(inst, 2))
    f_amin = statistics.fmean(total_flow_time(a_min(inst, seed)) for seed in range(20))
    parts = {
        "vLLM": within(f_vllm, 78319, 0.02),
        "GSA": within(f_gsa, 18268, 0.02),
        "A-Min": within(f_amin, 53508, 0.15),
        "order": f_gsa < f_amin < f_vllm,
    }
    bad = [k for k, v in parts.items() if not v]
    detail = (f"vLLM {f_vllm} (want 78319 +-2%), GSA {f_gsa} (want 18268 +-2%), "
              f"A-Min mean/20 {f_amin:.1f} (want 53508 +-15%), GSA < A-Min < vLLM {parts['order']}")
    if bad:
        detail += f"; off: {', '.join(bad)}"
    return report(3, "two-point instance", not bad, detail, time.perf_counter() - t0, 5)


def criterion_4() -> bool:
    t0 = time.perf_counter()
    res = formulas_suite(samples=1000)
    return report(4, "formula suite", res.ok, f"{res.passed} checks passed, {res.failed} failed",
                  time.perf_counter() - t0, 30)


def criterion_5() -> bool:
    t0 = time.perf_counter()
    res = ceiling_suite(200)
    return report(5, "ceiling inequality", res.ok and res.passed == 40000,
                  f"{res.passed}/40000 cases hold", time.perf_counter() - t0, 1)


def criterion_6() -> bool:
    t0 = time.perf_counter()
    cache: dict[tuple, int] = {}
    lb_bad = ratio_bad = 0
    single = {"gba": [0, 0], "gsa": [0, 0]}  # [equal to OPT, total]
    count = 0
    for inst in tiny_instances(max_n=4):
        count += 1
        key = (inst.prompt_len, inst.memory_budget, tuple(sorted(inst.lengths)))
        if key not in cache:
            cache[key] = brute_force_opt(inst)[0]
        opt = cache[key]
        if opt_lb_single(inst.n, min(inst.lengths), inst.prompt_len, inst.memory_budget) > opt:
            lb_bad += 1
        for alpha in ALPHAS:
            rep = opt_lb_multiclass(inst, alpha)
            if rep.opt_lb > opt:
                lb_bad += 1
            f_gba = total_flow_time(gba(inst, alpha))
            f_gsa = total_flow_time(gsa(inst, alpha))
            if f_gba > theorem_bound("gba", alpha, rep.k_min) * opt:
                ratio_bad += 1
            if f_gsa > theorem_bound("gsa", alpha, rep.k_min) * opt:
                ratio_bad += 1
            if inst.n == 1:
                for name, flow in (("gba", f_gba), ("gsa", f_gsa)):
                    single[name][1] += 1
                    single[name][0] += flow == opt
    c_ok = all(eq == tot for eq, tot in single.values())
    detail = (f"{count} instances; (a) lower-bound violations {lb_bad}; (b) ratio violations {ratio_bad}; "
              f"(c) single-job flow == OPT: GBA {single['gba'][0]}/{single['gba'][1]}, "
              f"GSA {single['gsa'][0]}/{single['gsa'][1]}")
    return report(6, "oracle ratio suite", lb_bad == 0 and ratio_bad == 0 and c_ok, detail,
                  time.perf_counter() - t0, 300)


def criterion_7() -> bool:
    t0 = time.perf_counter()
    res = lemmas_suite(count=200)
    return report(7, "upper-bound lemmas", res.ok, f"{res.passed} checks passed, {res.failed} failed",
                  time.perf_counter() - t0, 60)


def criterion_8() -> bool:
    t0 = time.perf_counter()
    inst = gen_long_job_trap(8, 10)
    f_gsa = total_flow_time(gsa(inst, 2))
    bound = long_job_trap_gsa_bound(8, 10)
    small_opt = brute_force_opt(gen_long_job_trap(4, 3))[0]
    f_vllm = total_flow_time(vllm_fcfs(inst))
    f_amin = statistics.fmean(total_flow_time(a_min(inst, seed)) for seed in range(20))
    ok = f_gsa <= bound and small_opt == long_job_trap_opt(4, 3) and f_vllm > f_gsa and f_amin > f_gsa
    detail = (f"GSA {f_gsa} <= {bound}; OPT(4,3) oracle {small_opt} vs closed form {long_job_trap_opt(4, 3)}; "
              f"vLLM {f_vllm}, A-Min mean/20 {f_amin:.1f} > GSA")
    return report(8, "long-job trap", ok, detail, time.perf_counter() - t0, 10)


def criterion_9() -> bool:
    t0 = time.perf_counter()
    inst = load_trace(TRACE, 79, 8192, limit=1000)
    n = inst.n
    m_gbad = total_flow_time(gba_d(inst, 2)) / n
    m_mcsf = total_flow_time(mc_sf(inst)) / n
    p2 = round_pow2(inst)
    m_spec = total_flow_time(gsa_spec(p2, 2, 64)) / n
    m_vllm = total_flow_time(vllm_fcfs(p2)) / n
    m_amin = statistics.fmean(total_flow_time(a_min(p2, seed)) for seed in range(5)) / n
    a_ok = m_gbad < m_mcsf
    b_ok = m_spec < m_vllm and m_spec < m_amin
    detail = (f"n={n}; GBA-D {m_gbad:.1f} < MC-SF {m_mcsf:.1f}: {a_ok}; "
              f"pow2 GSA-Spec {m_spec:.1f} < vLLM {m_vllm:.1f} and A-Min {m_amin:.1f}: {b_ok}")
    return report(9, "trace trend", a_ok and b_ok, detail, time.perf_counter() - t0, 120)


def criterion_10() -> bool:
    t0 = time.perf_counter()
    res = feasibility_suite(count=100)
    return report(10, "feasibility universality", res.ok,
                  f"{res.passed} policy runs clean, {res.failed} with violations", time.perf_counter() - t0, 60)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 11)])
def test_acceptance(criterion):
    assert criterion(), LINES[-1]


def main() -> int:
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
