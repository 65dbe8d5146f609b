"""Area lower bounds on the optimum, per-phase upper-bound terms, and ratio guarantees."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import ParameterError
from ..model import Instance, validate_instance
from .formulas import area, max_parallelism


def opt_lb_single(n: int, tau: int, s: int, M: int) -> Fraction:
    """Lower bound on the optimum when every job needs at least ``tau`` rounds."""
    return Fraction(n * (n + 1), 2) * Fraction(area(tau, s), M)


@dataclass(frozen=True)
class PhaseStats:
    phase: int
    n_p: int
    k_p: int
    n_gt: int
    n_ge: int
    area_p: Fraction
    Q_p: int
    S_p: int
    Delta_p: int
    T_p: int


@dataclass(frozen=True)
class BoundReport:
    within_class: Fraction
    between_classes: Fraction
    opt_lb: Fraction
    gba_ub: int
    gsa_ub: int
    gamma_gba: Fraction
    gamma_gsa: Fraction
    k_min: int


def theorem_bound(kind: str, alpha, k_min: int | None = None) -> Fraction:
    """Ratio guarantee for GBA or GSA; ``k_min=None`` gives the large-``k`` limit."""
    from ..schedulers.geometric import as_fraction

    a = as_fraction(alpha)
    if a <= 1:
        raise ParameterError(f"alpha must be > 1, got {a}")
    if k_min is not None and k_min < 1:
        raise ParameterError(f"k_min must be >= 1, got {k_min}")
    packing = 1 + (Fraction(2, k_min) if k_min is not None else 0)
    gba = a * a * packing + a + a / (a - 1)
    if kind == "gba":
        return gba
    if kind == "gsa":
        return (2 + 2 / (a - 1)) * gba
    raise ParameterError(f"kind must be 'gba' or 'gsa', got {kind!r}")


def ceiling_inequality_holds(n: int, k: int) -> bool:
    if n < 1 or k < 1:
        raise ParameterError("n and k must be >= 1")
    total = sum(-(-u // k) for u in range(1, n + 1))
    return n * -(-n // k) <= 2 * total


def _standard_config(inst: Instance, alpha, beta):
    from ..schedulers.geometric import as_fraction, geometric_config

    cfg = geometric_config(inst.prompt_len, inst.memory_budget, alpha)
    if beta is not None:
        beta = as_fraction(beta)
        if not 1 <= beta < cfg.alpha:
            raise ParameterError(f"beta must lie in [1, alpha) for bound reports, got {beta}")
        if beta != cfg.beta:
            cfg = geometric_config(inst.prompt_len, inst.memory_budget, alpha, beta)
    return cfg


def phase_diagnostics(inst: Instance, alpha, beta=None) -> tuple[list[PhaseStats], BoundReport]:
    """Per-phase terms and the resulting GBA/GSA upper bounds and OPT lower bound.

    Classes are formed exactly as GBA forms them. ``beta=None`` uses the
    value that makes the last boundary land on ``M - s``.
    """
    validate_instance(inst)
    cfg = _standard_config(inst, alpha, beta)
    s, M = inst.prompt_len, inst.memory_budget
    phases = cfg.phases
    counts = [0] * phases
    for o in inst.lengths:
        counts[cfg.class_of(o)] += 1
    taus = cfg.slice_int
    ks = [max_parallelism(tau, s, M) for tau in taus]
    n_ge = [0] * (phases + 1)
    for p in range(phases - 1, -1, -1):
        n_ge[p] = n_ge[p + 1] + counts[p]

    stats = []
    s_prefix = 0
    t_prefix = 0
    within = Fraction(0)
    between = Fraction(0)
    gba_ub = 0
    gsa_ub = 0
    for p in range(phases):
        n_p, k, tau = counts[p], ks[p], taus[p]
        n_gt = n_ge[p + 1]
        a_p = area(cfg.beta * cfg.alpha ** (p - 1), s)
        q_p = n_p * tau + sum(i * tau // k for i in range(n_p))
        delta_p = -(-(n_gt * tau) // k)
        stats.append(PhaseStats(p, n_p, k, n_gt, n_ge[p], Fraction(a_p), q_p, s_prefix, delta_p, t_prefix))
        within += Fraction(a_p) / M * Fraction(n_p * (n_p + 1), 2)
        between += Fraction(a_p) / M * n_gt * n_p
        gba_ub += n_p * s_prefix + q_p
        gsa_ub += n_p * (t_prefix + delta_p) + q_p
        s_prefix += n_p * tau // k + tau
        t_prefix += n_ge[p] * tau // k + tau
    k_min = min(k for k, n_p in zip(ks, counts) if n_p)
    report = BoundReport(
        within_class=within,
        between_classes=between,
        opt_lb=within + between,
        gba_ub=gba_ub,
        gsa_ub=gsa_ub,
        gamma_gba=theorem_bound("gba", cfg.alpha, k_min),
        gamma_gsa=theorem_bound("gsa", cfg.alpha, k_min),
        k_min=k_min,
    )
    return stats, report


def opt_lb_multiclass(inst: Instance, alpha, beta=None) -> BoundReport:
    """Area lower bound summed within and between GBA classes."""
    return phase_diagnostics(inst, alpha, beta)[1]
