"""Property suites behind ``kvsched verify``; each check counts passes and keeps failure notes."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .analysis import (
    area,
    brute_force_opt,
    ceiling_inequality_holds,
    max_parallelism,
    opt_lb_multiclass,
    opt_lb_single,
    parallelism_floor,
    peak_memory,
    phase_diagnostics,
    theorem_bound,
)
from .errors import MemoryViolation
from .model import Instance, memory_profile, simulate, total_flow_time, verify_feasibility
from .schedulers import POLICY_NAMES, SPS, PolicyParams, geometric_config, gba, gsa, run_policy

ALPHAS = (Fraction(4, 3), Fraction(3, 2), Fraction(2))


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)

    def check(self, ok: bool, note: str = "") -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 20:
                self.failures.append(note)

    @property
    def ok(self) -> bool:
        return self.failed == 0


def fuzz_instances(count: int, seed: int, max_n: int = 64, max_s: int = 32, max_o: int = 32):
    """Random feasible instances; lengths are skewed so long and short jobs mix."""
    rng = random.Random(seed)
    for _ in range(count):
        s = rng.randint(0, max_s)
        n = rng.randint(1, max_n)
        top = rng.randint(1, max_o)
        lengths = [rng.randint(1, top) if rng.random() < 0.7 else rng.randint(1, max_o) for _ in range(n)]
        M = max(s + o for o in lengths) + rng.randint(0, 4 * (s + max_o))
        yield Instance.from_lengths(s, M, lengths)


def formulas_suite(samples: int = 1000, seed: int = 0) -> SuiteResult:
    """Peak closed form against simulation, monotonicity, k* floor, packing efficiency."""
    res = SuiteResult("formulas")
    rng = random.Random(seed)
    for _ in range(samples):
        k, tau, s = rng.randint(1, 40), rng.randint(1, 40), rng.randint(0, 20)
        peak = peak_memory(k, tau, s)
        inst = Instance.from_lengths(s, peak, [tau] * (3 * k))
        try:
            seen = max(memory_profile(simulate(inst, SPS(k, tau)), inst))
        except MemoryViolation as err:
            seen = err.used
        res.check(seen == peak, f"peak k={k} tau={tau} s={s}: formula {peak}, simulated {seen}")
        res.check(peak_memory(k + 1, tau, s) > peak, f"monotone k={k} tau={tau} s={s}")
        M = s + tau + rng.randint(0, 400)
        kstar = max_parallelism(tau, s, M)
        res.check(kstar >= parallelism_floor(tau, s, M), f"floor tau={tau} s={s} M={M}")
        res.check(peak_memory(kstar, tau, s) <= M < peak_memory(kstar + 1, tau, s), f"k* tau={tau} s={s} M={M}")
        lhs = Fraction(tau, kstar)
        rhs = (1 + Fraction(2, kstar)) * Fraction(area(tau, s), M)
        res.check(lhs < rhs, f"packing tau={tau} s={s} M={M}: {lhs} !< {rhs}")
    return res


def ceiling_suite(limit: int = 200) -> SuiteResult:
    res = SuiteResult("ceiling")
    for n in range(1, limit + 1):
        for k in range(1, limit + 1):
            res.check(ceiling_inequality_holds(n, k), f"n={n} k={k}")
    return res


def lemmas_suite(count: int = 200, seed: int = 1) -> SuiteResult:
    """Simulated GBA/GSA against their upper bounds, plus the two aggregate inequalities."""
    res = SuiteResult("lemmas")
    for idx, inst in enumerate(fuzz_instances(count, seed)):
        alpha = ALPHAS[idx % len(ALPHAS)]
        stats, rep = phase_diagnostics(inst, alpha)
        f_gba = total_flow_time(gba(inst, alpha))
        f_gsa = total_flow_time(gsa(inst, alpha))
        tag = f"#{idx} alpha={alpha}"
        res.check(f_gba <= rep.gba_ub, f"{tag}: gba {f_gba} > {rep.gba_ub}")
        res.check(f_gsa <= rep.gsa_ub, f"{tag}: gsa {f_gsa} > {rep.gsa_ub}")
        sum_ns = sum(p.n_p * p.S_p for p in stats)
        sum_q = sum(p.Q_p for p in stats)
        sum_nd = sum(p.n_p * p.Delta_p for p in stats)
        sum_nt = sum(p.n_p * p.T_p for p in stats)
        res.check(sum_nd <= sum_ns + sum_q, f"{tag}: spillover {sum_nd} > {sum_ns + sum_q}")
        bound = (1 + 2 / (alpha - 1)) * sum_ns + (2 / (alpha - 1)) * sum_q
        res.check(sum_nt <= bound, f"{tag}: prefix {sum_nt} > {bound}")
    return res


def tiny_instances(max_n: int = 4, max_o: int = 4, s_values=(0, 1, 2), max_M: int = 12):
    for n in range(1, max_n + 1):
        for lengths in itertools.product(range(1, max_o + 1), repeat=n):
            for s in s_values:
                for M in range(max(s + o for o in lengths), max_M + 1):
                    yield Instance.from_lengths(s, M, lengths)


def single_job_gsa_flow(o: int, s: int, M: int, alpha) -> int:
    """A lone job is killed after each slice shorter than ``o``, then runs to completion."""
    wasted = 0
    for tau in geometric_config(s, M, alpha).slice_int:
        if tau >= o:
            return wasted + o
        wasted += tau
    raise AssertionError("last slice always covers a feasible job")


def oracle_suite(max_n: int = 4) -> SuiteResult:
    """Lower bounds below OPT, ratio guarantees, and exactness on single jobs."""
    res = SuiteResult("oracle")
    opt_cache: dict[tuple, int] = {}
    for inst in tiny_instances(max_n=max_n):
        key = (inst.prompt_len, inst.memory_budget, tuple(sorted(inst.lengths)))
        if key not in opt_cache:
            opt_cache[key] = brute_force_opt(inst)[0]
        opt = opt_cache[key]
        s, M, n = inst.prompt_len, inst.memory_budget, inst.n
        tag = f"s={s} M={M} o={list(inst.lengths)}"
        lb = opt_lb_single(n, min(inst.lengths), s, M)
        res.check(lb <= opt, f"{tag}: single lb {lb} > OPT {opt}")
        for alpha in ALPHAS:
            rep = opt_lb_multiclass(inst, alpha)
            res.check(rep.opt_lb <= opt, f"{tag} alpha={alpha}: lb {rep.opt_lb} > OPT {opt}")
            f_gba = total_flow_time(gba(inst, alpha))
            f_gsa = total_flow_time(gsa(inst, alpha))
            res.check(f_gba <= theorem_bound("gba", alpha, rep.k_min) * opt, f"{tag} alpha={alpha}: gba {f_gba}")
            res.check(f_gsa <= theorem_bound("gsa", alpha, rep.k_min) * opt, f"{tag} alpha={alpha}: gsa {f_gsa}")
            if n == 1:
                res.check(f_gba == opt, f"{tag} alpha={alpha}: single job gba {f_gba} OPT {opt}")
                lone = single_job_gsa_flow(inst.lengths[0], s, M, alpha)
                res.check(f_gsa == lone, f"{tag} alpha={alpha}: single job gsa {f_gsa}, expected {lone}")
    return res


def feasibility_suite(count: int = 100, seed: int = 2) -> SuiteResult:
    """Every policy on fuzzed instances: empty violation report, all jobs complete."""
    res = SuiteResult("feasibility")
    for idx, inst in enumerate(fuzz_instances(count, seed)):
        alpha = ALPHAS[idx % len(ALPHAS)]
        for name in POLICY_NAMES:
            if name == "sims" and len(set(inst.lengths)) != 1:
                inst_ = inst.with_lengths([max(inst.lengths)] * inst.n)
            else:
                inst_ = inst
            tl = run_policy(inst_, PolicyParams(name, alpha=alpha, seed=idx))
            bad = verify_feasibility(tl, inst_)
            done = all(c is not None for c in tl.completions)
            res.check(not bad and done, f"#{idx} {name}: {bad[:2]}")
    return res


SUITES = {
    "formulas": lambda: [formulas_suite(), ceiling_suite()],
    "lemmas": lambda: [lemmas_suite()],
    "oracle": lambda: [oracle_suite()],
    "feasibility": lambda: [feasibility_suite()],
}


def run_suites(name: str) -> list[SuiteResult]:
    if name == "all":
        return [r for key in SUITES for r in SUITES[key]()]
    return SUITES[name]()
