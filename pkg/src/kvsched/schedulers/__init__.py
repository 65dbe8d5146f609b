"""All scheduling policies, each usable as an engine policy or as a one-call function."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import ParameterError
from ..model import Instance, Timeline, simulate
from .baselines import MCSF, VLLM, AMin, projected_peak
from .geometric import GBA, GSA, GeometricConfig, as_fraction, geometric_config
from .heuristics import GBAD, GSASpec
from .sps import SPS, SimS, SpsPlan, StartTimes, WindowPolicy, sps_plan, sps_starts

POLICY_NAMES = ("sps", "gba", "gsa", "sims", "mc-sf", "a-min", "vllm", "gba-d", "gsa-spec")


@dataclass(frozen=True)
class PolicyParams:
    name: str
    alpha: Fraction = Fraction(2)
    beta_override: Fraction | None = None
    seed: int = 0
    k_override: int | None = None
    tau_override: int | None = None

    def __post_init__(self):
        if self.name not in POLICY_NAMES:
            raise ParameterError(f"unknown policy {self.name!r}; choose from {', '.join(POLICY_NAMES)}")
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        if self.beta_override is not None:
            object.__setattr__(self, "beta_override", as_fraction(self.beta_override))
        if self.name in ("gba", "gsa", "gba-d", "gsa-spec") and self.alpha <= 1:
            raise ParameterError(f"alpha must be > 1 for {self.name}")


def make_policy(params: PolicyParams):
    name = params.name
    if name == "sps":
        return SPS(params.k_override, params.tau_override)
    if name == "gba":
        return GBA(params.alpha, params.beta_override)
    if name == "gsa":
        return GSA(params.alpha, params.beta_override)
    if name == "sims":
        return SimS()
    if name == "mc-sf":
        return MCSF()
    if name == "a-min":
        return AMin(params.seed)
    if name == "vllm":
        return VLLM()
    if name == "gba-d":
        return GBAD(params.alpha, params.beta_override)
    return GSASpec(params.alpha, params.beta_override)


def run_policy(inst: Instance, params: PolicyParams, horizon: int | None = None) -> Timeline:
    return simulate(inst, make_policy(params), horizon)


def gba(inst: Instance, alpha=2, beta_override=None) -> Timeline:
    return simulate(inst, GBA(alpha, beta_override))


def gsa(inst: Instance, alpha=2, beta_override=None) -> Timeline:
    return simulate(inst, GSA(alpha, beta_override))


def sims(inst: Instance) -> Timeline:
    return simulate(inst, SimS())


def sps(inst: Instance, k: int | None = None, tau: int | None = None) -> Timeline:
    return simulate(inst, SPS(k, tau))


def mc_sf(inst: Instance) -> Timeline:
    return simulate(inst, MCSF())


def a_min(inst: Instance, seed: int = 0) -> Timeline:
    return simulate(inst, AMin(seed))


def vllm_fcfs(inst: Instance) -> Timeline:
    return simulate(inst, VLLM())


def gba_d(inst: Instance, alpha=2, beta_override=None, reuse_slots: bool = False) -> Timeline:
    return simulate(inst, GBAD(alpha, beta_override, reuse_slots=reuse_slots))


def gsa_spec(inst: Instance, alpha=2, beta_override=None) -> Timeline:
    return simulate(inst, GSASpec(alpha, beta_override))


__all__ = [
    "AMin", "GBA", "GBAD", "GSA", "GSASpec", "GeometricConfig", "MCSF", "POLICY_NAMES",
    "PolicyParams", "SPS", "SimS", "SpsPlan", "StartTimes", "VLLM", "WindowPolicy",
    "a_min", "as_fraction", "gba", "gba_d", "geometric_config", "gsa", "gsa_spec",
    "make_policy", "mc_sf", "projected_peak", "run_policy", "sims", "sps", "sps_plan",
    "sps_starts", "vllm_fcfs",
]
