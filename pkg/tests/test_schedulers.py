from fractions import Fraction

import pytest

from kvsched.analysis import peak_memory
from kvsched.errors import NonIdenticalJobs, NonTermination, ParameterError
from kvsched.model import Instance, memory_profile, simulate, total_flow_time, verify_feasibility
from kvsched.schedulers import (
    GBA,
    GSA,
    POLICY_NAMES,
    SPS,
    PolicyParams,
    a_min,
    gba,
    gba_d,
    geometric_config,
    gsa,
    gsa_spec,
    make_policy,
    mc_sf,
    run_policy,
    sims,
    sps_plan,
    vllm_fcfs,
)
from kvsched.suites import fuzz_instances
from kvsched.workloads import gen_long_job_trap


# ---------------------------------------------------------------- SPS

def test_sps_plan_example():
    plan = sps_plan(range(15), 5, 5)
    assert plan.starts == list(range(15))
    assert plan.slots[3] == (3, 3, 8)


def test_sps_plan_single():
    plan = sps_plan([0], 1, 9)
    assert plan.slots == ((0, 0, 9),)


def test_sps_plan_uneven():
    assert sps_plan(range(7), 3, 5).starts == [0, 1, 3, 5, 6, 8, 10]


def test_sps_plan_bad_params():
    with pytest.raises(ParameterError):
        sps_plan([0], 0, 3)


@pytest.mark.parametrize("k,tau", [(1, 1), (3, 5), (4, 6), (7, 3), (5, 10)])
def test_sps_period_law(k, tau):
    st = sps_plan(range(5 * k), k, tau).starts
    assert all(st[j + k] - st[j] == tau for j in range(len(st) - k))
    assert st == sorted(st)


@pytest.mark.parametrize("k,tau,s", [(5, 5, 0), (3, 4, 2), (6, 9, 1), (2, 7, 5)])
def test_sps_peak_law(k, tau, s):
    peak = peak_memory(k, tau, s)
    inst = Instance.from_lengths(s, peak, [tau] * (3 * k))
    prof = memory_profile(simulate(inst, SPS(k, tau)), inst)
    assert max(prof) == peak
    assert prof[tau - 1 + tau] == peak


def test_sps_slice_too_short_never_finishes():
    # the second job is killed at its slot end and SPS never offers another slot
    inst = Instance.from_lengths(0, 20, [3, 6])
    with pytest.raises(NonTermination):
        simulate(inst, SPS(2, 4), horizon=40)


# ---------------------------------------------------------------- geometric config / GBA

def test_geometric_config_pow2():
    cfg = geometric_config(0, 256, 2)
    assert cfg.ell == 8
    assert cfg.beta == 1
    assert cfg.slice_int == (1, 2, 4, 8, 16, 32, 64, 128, 256)


def test_geometric_config_rational():
    cfg = geometric_config(3, 100, Fraction(3, 2))
    assert 1 <= cfg.beta < cfg.alpha
    assert cfg.slice_hat[-1] == 97
    assert cfg.slice_int[0] >= 1
    hats = cfg.slice_hat
    assert all(a < b for a, b in zip(hats, hats[1:]))
    # small alpha can floor two early boundaries to the same integer
    assert list(cfg.slice_int) == sorted(cfg.slice_int)
    assert cfg.slice_int[:2] == (1, 1)


def test_geometric_config_beta_override():
    cfg = geometric_config(79, 8192, 2, beta_override=64)
    assert cfg.slice_int[0] == 64
    assert cfg.slice_int[-1] == 8113
    assert all(b == 2 * a for a, b in zip(cfg.slice_int[:-2], cfg.slice_int[1:-1]))


def test_geometric_config_bad_alpha():
    with pytest.raises(ParameterError):
        geometric_config(0, 16, 1)


def test_gba_uniform_instance(uniform):
    assert total_flow_time(gba(uniform, 2)) == 14083


def test_gba_single_job():
    tl = gba(Instance.from_lengths(0, 16, [5]), 2)
    assert total_flow_time(tl) == 5
    assert tl.runs() == [(0, 0, 5, True)]


def test_gba_class_partition():
    for inst in fuzz_instances(40, seed=5):
        for alpha in (Fraction(4, 3), Fraction(3, 2), Fraction(2)):
            cfg = geometric_config(inst.prompt_len, inst.memory_budget, alpha)
            for o in inst.lengths:
                p = cfg.class_of(o)
                lower = cfg.slice_hat[p] / alpha if p > 0 else Fraction(0)
                assert lower < o <= cfg.slice_hat[p]
                assert o <= cfg.slice_int[p]


def test_gba_never_kills():
    for inst in fuzz_instances(60, seed=6):
        assert gba(inst, 2).kills == ()


# ---------------------------------------------------------------- GSA

def test_gsa_two_point_within_tolerance(two_point):
    flow = total_flow_time(gsa(two_point, 2))
    assert abs(flow - 18268) <= 0.02 * 18268


def test_gsa_single_unit_job():
    assert total_flow_time(gsa(Instance.from_lengths(0, 2, [1]), 2)) == 1


def test_gsa_long_job_trap():
    assert total_flow_time(gsa(gen_long_job_trap(8, 10), 2)) <= 35 + 8 + 2046


def test_gsa_kill_count_law():
    for idx, inst in enumerate(fuzz_instances(60, seed=7)):
        alpha = (Fraction(4, 3), Fraction(3, 2), Fraction(2))[idx % 3]
        cfg = geometric_config(inst.prompt_len, inst.memory_budget, alpha)
        tl = gsa(inst, alpha)
        per_job = [0] * inst.n
        for _, i in tl.kills:
            per_job[i] += 1
        for i, o in enumerate(inst.lengths):
            assert per_job[i] == sum(1 for tau in cfg.slice_int if tau < o)


def test_gsa_phase_order_by_id():
    inst = Instance.from_lengths(0, 4, [1, 1, 1, 1])
    tl = gsa(inst, 2)
    assert list(tl.completions) == sorted(tl.completions)


# ---------------------------------------------------------------- SimS

def test_sims_example(worked):
    policy = make_policy(PolicyParams("sims"))
    tl = simulate(worked, policy)
    assert policy.batch_size == 3
    assert total_flow_time(tl) == 225


def test_sims_single():
    assert total_flow_time(sims(Instance.from_lengths(0, 4, [4]))) == 4


def test_sims_mixed():
    with pytest.raises(NonIdenticalJobs):
        sims(Instance.from_lengths(0, 10, [2, 3]))


# ---------------------------------------------------------------- MC-SF

def test_mcsf_uniform_instance(uniform):
    assert total_flow_time(mc_sf(uniform)) == 21632


def test_mcsf_single():
    assert total_flow_time(mc_sf(Instance.from_lengths(3, 10, [6]))) == 6


def test_mcsf_two_jobs():
    tl = mc_sf(Instance.from_lengths(0, 3, [2, 2]))
    assert tl.rounds[0] == (0,)
    assert tl.completions == (2, 3)
    assert tl.kills == ()


def test_mcsf_never_kills():
    for inst in fuzz_instances(40, seed=8):
        assert mc_sf(inst).kills == ()


# ---------------------------------------------------------------- A-Min

def test_amin_ample_memory():
    inst = Instance.from_lengths(2, 5 * 7, [5] * 5)
    tl = a_min(inst, seed=1)
    assert tl.rounds[0] == (0, 1, 2, 3, 4)
    assert total_flow_time(tl) == 25


def test_amin_single():
    tl = a_min(Instance.from_lengths(0, 9, [9]), seed=4)
    assert total_flow_time(tl) == 9
    assert tl.kills == ()


def test_amin_seeded_determinism(two_point):
    assert a_min(two_point, seed=11) == a_min(two_point, seed=11)


def test_amin_non_clairvoyant():
    assert make_policy(PolicyParams("a-min")).clairvoyant is False


# ---------------------------------------------------------------- vLLM

def test_vllm_single():
    assert total_flow_time(vllm_fcfs(Instance.from_lengths(1, 9, [8]))) == 8


def test_vllm_two_jobs():
    tl = vllm_fcfs(Instance.from_lengths(0, 3, [2, 2]))
    assert total_flow_time(tl) == 5
    assert verify_feasibility(tl, Instance.from_lengths(0, 3, [2, 2])) == []


def test_vllm_evicts_latest_id():
    inst = Instance.from_lengths(0, 6, [3, 3, 3])
    tl = vllm_fcfs(inst)
    killed = {i for _, i in tl.kills}
    assert 0 not in killed
    assert verify_feasibility(tl, inst) == []


# ---------------------------------------------------------------- GBA-D / GSA-Spec

def test_gba_d_single_matches_gba():
    inst = Instance.from_lengths(2, 30, [17])
    assert gba_d(inst, 2).completions == gba(inst, 2).completions


def test_gba_d_dominates_per_job():
    for idx, inst in enumerate(fuzz_instances(200, seed=9)):
        alpha = (Fraction(4, 3), Fraction(3, 2), Fraction(2))[idx % 3]
        base = gba(inst, alpha).completions
        for reuse in (False, True):
            tl = gba_d(inst, alpha, reuse_slots=reuse)
            assert all(a <= b for a, b in zip(tl.completions, base)), idx
            assert tl.kills == ()


def test_gsa_spec_dominates_per_job():
    for idx, inst in enumerate(fuzz_instances(200, seed=10)):
        alpha = (Fraction(4, 3), Fraction(3, 2), Fraction(2))[idx % 3]
        base = gsa(inst, alpha).completions
        tl = gsa_spec(inst, alpha)
        assert verify_feasibility(tl, inst) == []
        assert all(a <= b for a, b in zip(tl.completions, base)), idx


def test_gsa_spec_beta_override(two_point):
    base = total_flow_time(gsa(two_point, 2, beta_override=4))
    assert total_flow_time(gsa_spec(two_point, 2, beta_override=4)) <= base


# ---------------------------------------------------------------- params

def test_policy_params_validation():
    with pytest.raises(ParameterError):
        PolicyParams("bogus")
    with pytest.raises(ParameterError):
        PolicyParams("gsa", alpha=1)
    assert PolicyParams("gsa", alpha="1.5").alpha == Fraction(3, 2)
    assert PolicyParams("gba", alpha="4/3").alpha == Fraction(4, 3)


@pytest.mark.parametrize("name", POLICY_NAMES)
def test_every_policy_runs(name):
    inst = Instance.from_lengths(1, 12, [4] * 6)
    tl = run_policy(inst, PolicyParams(name, seed=2))
    assert verify_feasibility(tl, inst) == []
    assert all(c is not None for c in tl.completions)


def test_policy_classes_exposed():
    assert isinstance(make_policy(PolicyParams("gba")), GBA)
    assert isinstance(make_policy(PolicyParams("gsa")), GSA)
