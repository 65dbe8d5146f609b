"""Command-line front end: ``kvsched run | sweep | verify | render``."""
from __future__ import annotations

import argparse
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import export
from .analysis import phase_diagnostics
from .errors import KVSchedError, ParameterError
from .model import Instance, run_metrics
from .render import render_svg
from .schedulers import POLICY_NAMES, PolicyParams, as_fraction, run_policy
from .workloads import (
    LoadReport,
    gen_identical,
    gen_long_job_trap,
    gen_sims_adversarial,
    gen_two_point,
    load_trace,
    round_pow2,
)

GENERATORS = ("identical", "two-point", "trap", "lb2", "lb3")
SEEDED = {"a-min"}


# ---------------------------------------------------------------- instances

def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise ParameterError(f"--gen {args.gen} needs {flags}")


def build_instance(args, n: int | None = None, M: int | None = None) -> Instance:
    """Resolve the instance flags; ``n`` and ``M`` override the flag values (sweeps)."""
    n = args.n if n is None else n
    M = args.M if M is None else M
    if args.instance:
        inst = export.load_instance(args.instance)
    elif args.trace:
        s = 79 if args.s is None else args.s
        M = 8192 if M is None else M
        report = LoadReport()
        inst = load_trace(args.trace, s, M, limit=n if n is not None else args.limit, report=report)
        if report.skipped_too_long:
            print(f"note: skipped {report.skipped_too_long} records longer than M - s", file=sys.stderr)
    elif args.gen == "identical":
        args_n = argparse.Namespace(**{**vars(args), "n": n, "M": M})
        _need(args_n, "n", "o", "s", "M")
        inst = gen_identical(n, args.s, args.o, M)
    elif args.gen == "two-point":
        s = 96 if args.s is None else args.s
        M = 256 if M is None else M
        inst = gen_two_point(args.n_short, args.o_short, args.n_long, args.o_long, s, M)
    elif args.gen == "trap":
        _need(argparse.Namespace(n=n, ell=args.ell, gen=args.gen), "n", "ell")
        inst = gen_long_job_trap(n, args.ell)
    elif args.gen == "lb2":
        _need(argparse.Namespace(n=n, o=args.o, B=args.B, gen=args.gen), "n", "o", "B")
        inst = gen_sims_adversarial("lb2", o=args.o, B=args.B, n=n)
    elif args.gen == "lb3":
        _need(argparse.Namespace(n=n, o=args.o, delta=args.delta, gen=args.gen), "n", "o", "delta")
        inst = gen_sims_adversarial("lb3", o=args.o, delta=args.delta, n=n)
    else:
        raise ParameterError("choose an instance with --gen, --trace or --instance")
    if args.pow2:
        inst = round_pow2(inst)
    return inst


def policy_params(args, name: str | None = None, alpha=None, beta=None, seed: int | None = None) -> PolicyParams:
    return PolicyParams(
        name=name or args.policy,
        alpha=as_fraction(alpha if alpha is not None else args.alpha),
        beta_override=beta if beta is not None else (as_fraction(args.beta) if args.beta else None),
        seed=args.seed if seed is None else seed,
        k_override=args.k,
        tau_override=args.tau,
    )


# ---------------------------------------------------------------- summaries

def summary_row(inst: Instance, params: PolicyParams, tl) -> dict:
    m = run_metrics(tl, inst)
    row = {
        "policy": params.name,
        "n": inst.n,
        "s": inst.prompt_len,
        "M": inst.memory_budget,
        "alpha": str(params.alpha),
        "beta": "" if params.beta_override is None else str(params.beta_override),
        "seed": params.seed,
        "total_flow": m.total_flow_time,
        "mean_flow": m.mean_flow_time,
        "kill_count": m.kill_count,
        "peak_memory": m.peak_memory,
        "makespan": m.makespan,
    }
    alpha = params.alpha if params.alpha > 1 else Fraction(2)
    _, rep = phase_diagnostics(inst, alpha)
    row.update(
        opt_lb=rep.opt_lb,
        gba_ub=rep.gba_ub,
        gsa_ub=rep.gsa_ub,
        k_min=rep.k_min,
        gamma_gba=rep.gamma_gba,
        gamma_gsa=rep.gamma_gsa,
        flow_over_lb=Fraction(m.total_flow_time) / rep.opt_lb,
    )
    return row


# ---------------------------------------------------------------- commands

def cmd_run(args) -> int:
    inst = build_instance(args)
    params = policy_params(args)
    tl = run_policy(inst, params, horizon=args.horizon)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    export.save_instance(inst, out / "instance.json")
    with open(out / "timeline.csv", "w", encoding="utf-8", newline="") as f:
        export.write_timeline(tl, inst, f)
    with open(out / "completions.csv", "w", encoding="utf-8", newline="") as f:
        export.write_completions(tl, inst, f)
    row = summary_row(inst, params, tl)
    with open(out / "summary.csv", "w", encoding="utf-8", newline="") as f:
        export.write_rows([row], f)
    if args.render:
        (out / "memory.svg").write_text(render_svg(tl, inst, f"{params.name}: total flow {row['total_flow']}"),
                                        encoding="utf-8")
    for key in ("policy", "n", "total_flow", "mean_flow", "kill_count", "peak_memory", "makespan", "opt_lb"):
        print(f"{key}: {export.fmt(row[key])}")
    print(f"outputs: {out}")
    return 0


def _parse_values(text: str | None, conv=int) -> list:
    """``"100:1000:100"`` (inclusive range) or ``"a,b,c"``."""
    if text is None:
        return [None]
    text = text.strip()
    if ":" in text and "/" not in text:
        parts = [int(x) for x in text.split(":")]
        if len(parts) == 2:
            parts.append(1)
        lo, hi, step = parts
        if step <= 0:
            raise ParameterError(f"range step must be positive: {text}")
        return list(range(lo, hi + 1, step))
    return [conv(x) for x in text.split(",") if x.strip()]


def _sweep_task(task):
    args, n, M, alpha, beta, name, seeds = task
    inst = build_instance(args, n=n, M=M)
    flows = []
    kills = []
    for seed in seeds:
        params = policy_params(args, name=name, alpha=alpha, beta=beta, seed=seed)
        tl = run_policy(inst, params, horizon=args.horizon)
        m = run_metrics(tl, inst)
        flows.append(m.mean_flow_time)
        kills.append(m.kill_count)
    return {
        "n": inst.n,
        "M": inst.memory_budget,
        "s": inst.prompt_len,
        "alpha": "" if alpha is None else str(alpha),
        "beta": "" if beta is None else str(beta),
        "policy": name,
        "runs": len(seeds),
        "mean_flow": statistics.fmean(float(f) for f in flows),
        "mean_flow_std": statistics.stdev(float(f) for f in flows) if len(flows) > 1 else 0.0,
        "kills_mean": statistics.fmean(kills),
    }


def cmd_sweep(args) -> int:
    policies = [p.strip() for p in args.policies.split(",") if p.strip()]
    for p in policies:
        if p not in POLICY_NAMES:
            raise ParameterError(f"unknown policy {p!r}")
    ns = _parse_values(args.n_values) if args.n_values else [args.n]
    Ms = _parse_values(args.M_values) if args.M_values else [args.M]
    alphas = _parse_values(args.alpha_values, as_fraction) if args.alpha_values else [as_fraction(args.alpha)]
    betas = _parse_values(args.beta_values, as_fraction) if args.beta_values else [
        as_fraction(args.beta) if args.beta else None]
    tasks = []
    for n in ns:
        for M in Ms:
            for alpha in alphas:
                for beta in betas:
                    for name in policies:
                        seeds = list(range(args.seed, args.seed + args.seeds)) if name in SEEDED else [args.seed]
                        tasks.append((args, n, M, alpha, beta, name, seeds))
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_sweep_task, tasks))
    else:
        rows = [_sweep_task(t) for t in tasks]
    if args.out == "-":
        export.write_rows(rows, sys.stdout)
    else:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        with open(args.out, "w", encoding="utf-8", newline="") as f:
            export.write_rows(rows, f)
        print(f"{len(rows)} rows -> {args.out}")
    return 0


def cmd_verify(args) -> int:
    from .suites import run_suites

    failed = 0
    for res in run_suites(args.suite):
        status = "ok" if res.ok else "FAILED"
        print(f"{res.name}: {res.passed} passed, {res.failed} failed [{status}]")
        for note in res.failures:
            print(f"  - {note}")
        failed += res.failed
    return 2 if failed else 0


def cmd_render(args) -> int:
    inst = export.load_instance(args.instance)
    with open(args.timeline, encoding="utf-8") as f:
        tl = export.read_timeline(f, inst)
    Path(args.out).write_text(render_svg(tl, inst, args.title or ""), encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


# ---------------------------------------------------------------- parser

def _instance_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("instance")
    g.add_argument("--gen", choices=GENERATORS)
    g.add_argument("--trace", help="response-length file (one integer per line, or CSV with response_len)")
    g.add_argument("--instance", help="instance JSON written by a previous run")
    g.add_argument("--limit", type=int, help="use the first LIMIT valid trace records")
    g.add_argument("--pow2", action="store_true", help="round response lengths up to powers of two")
    g.add_argument("--n", type=int)
    g.add_argument("--o", type=int)
    g.add_argument("--s", type=int)
    g.add_argument("--M", type=int)
    g.add_argument("--n-short", type=int, default=194)
    g.add_argument("--o-short", type=int, default=1)
    g.add_argument("--n-long", type=int, default=6)
    g.add_argument("--o-long", type=int, default=160)
    g.add_argument("--ell", type=int)
    g.add_argument("--delta", type=int)
    g.add_argument("--B", type=int)


def _policy_flags(p: argparse.ArgumentParser, single: bool = True) -> None:
    g = p.add_argument_group("policy")
    if single:
        g.add_argument("--policy", choices=POLICY_NAMES, default="gsa")
    g.add_argument("--alpha", default="2", help="rational such as 2, 4/3 or 1.5")
    g.add_argument("--beta", help="override the first slice length")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--k", type=int, help="SPS parallelism")
    g.add_argument("--tau", type=int, help="SPS slice length")
    g.add_argument("--horizon", type=int, help="round cap before giving up")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kvsched", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one policy on one instance")
    run.add_argument("--config", help="key=value file; command-line flags win")
    _instance_flags(run)
    _policy_flags(run)
    run.add_argument("--out", default="kvsched-out", help="output directory")
    run.add_argument("--render", action="store_true", help="also write memory.svg")
    run.set_defaults(func=cmd_run)

    sweep = sub.add_parser("sweep", help="one summary row per (point, policy)")
    sweep.add_argument("--config", help="key=value file; command-line flags win")
    _instance_flags(sweep)
    _policy_flags(sweep, single=False)
    sweep.add_argument("--policies", default="gsa")
    sweep.add_argument("--n-values", help="LO:HI:STEP or comma list")
    sweep.add_argument("--M-values")
    sweep.add_argument("--alpha-values")
    sweep.add_argument("--beta-values")
    sweep.add_argument("--seeds", type=int, default=1, help="seeds per point for randomized policies")
    sweep.add_argument("--workers", type=int, default=1, help="worker processes")
    sweep.add_argument("--out", default="-", help="CSV path, or - for stdout")
    sweep.set_defaults(func=cmd_sweep)

    verify = sub.add_parser("verify", help="run property suites")
    verify.add_argument("suite", choices=("formulas", "lemmas", "oracle", "feasibility", "all"))
    verify.set_defaults(func=cmd_verify)

    render = sub.add_parser("render", help="SVG memory chart from exported files")
    render.add_argument("--timeline", required=True)
    render.add_argument("--instance", required=True)
    render.add_argument("--out", required=True)
    render.add_argument("--title")
    render.set_defaults(func=cmd_render)
    return parser


def config_tokens(path: str, sub: argparse.ArgumentParser) -> list[str]:
    """Turn a key=value file into flag tokens for ``sub``."""
    flags = {opt: act for act in sub._actions for opt in act.option_strings}
    tokens: list[str] = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{lineno}: expected key=value")
        key, value = (x.strip() for x in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        act = flags.get(flag)
        if act is None:
            raise ParameterError(f"{path}:{lineno}: unknown key {key!r}")
        if isinstance(act, argparse._StoreTrueAction):
            if value.lower() in ("1", "true", "yes", "on"):
                tokens.append(flag)
        else:
            tokens.extend([flag, value])
    return tokens


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "config", None):
            sub = parser._subparsers._group_actions[0].choices[args.command]  # type: ignore[union-attr]
            args = parser.parse_args([args.command, *config_tokens(args.config, sub), *argv[1:]])
        return args.func(args)
    except (KVSchedError, OSError) as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
