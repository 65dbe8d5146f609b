"""Instance generators for the experiment families, plus trace loading."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

from .errors import AllRecordsInfeasible, InfeasibleJob, ParameterError, ParseError
from .model import Instance, validate_instance


def gen_identical(n: int, s: int, o: int, M: int) -> Instance:
    return validate_instance(Instance.from_lengths(s, M, [o] * n))


def gen_two_point(n_short: int, o_short: int, n_long: int, o_long: int, s: int, M: int) -> Instance:
    """Long jobs take ids ``0..n_long-1``, short jobs follow."""
    return validate_instance(Instance.from_lengths(s, M, [o_long] * n_long + [o_short] * n_short))


def gen_long_job_trap(n: int, ell: int) -> Instance:
    """One job of length ``2**ell`` (id 0) and ``n - 1`` unit jobs, with ``s = 2**ell`` and ``M = 2 s``.

    Any two jobs together overflow memory, so jobs run one at a time.
    """
    if n < 2 or ell < 1:
        raise ParameterError(f"need n >= 2 and ell >= 1, got n={n}, ell={ell}")
    big = 1 << ell
    return validate_instance(Instance.from_lengths(big, 2 * big, [big] + [1] * (n - 1)))


def long_job_trap_opt(n: int, ell: int) -> int:
    """Optimal flow on the trap: unit jobs first, then the long one."""
    return n * (n + 1) // 2 + (1 << ell) - 1


def long_job_trap_gsa_bound(n: int, ell: int) -> int:
    return (n + 2) * (n - 1) // 2 + n + (1 << (ell + 1)) - 2


def gen_sims_adversarial(kind: str, **params) -> Instance:
    """Identical-job families on which simultaneous batching is far from optimal.

    ``lb2(o, B, n)``: ``s = 0``, ``M = o * B``, ``n`` a multiple of ``B``.
    ``lb3(o, delta, n)``: ``s = 0``, ``o`` a multiple of 3, ``delta >= 2``,
    ``M = 2 o - 3 delta + 3`` so only one job fits a batch.
    """
    if kind == "lb2":
        o, B, n = params["o"], params["B"], params["n"]
        if o < 1 or B < 1 or n < 1 or n % B:
            raise ParameterError(f"lb2 needs o, B >= 1 and n a positive multiple of B, got {params}")
        return gen_identical(n, 0, o, o * B)
    if kind == "lb3":
        o, delta, n = params["o"], params["delta"], params["n"]
        if delta < 2:
            raise ParameterError(f"lb3 needs delta >= 2, got {delta}")
        if o < 3 or o % 3:
            raise ParameterError(f"lb3 needs o a positive multiple of 3, got {o}")
        M = 2 * o - 3 * delta + 3
        if M < o:
            raise ParameterError(f"lb3 with o={o}, delta={delta} gives M={M} < o")
        if n < 1:
            raise ParameterError("lb3 needs n >= 1")
        return gen_identical(n, 0, o, M)
    raise ParameterError(f"kind must be 'lb2' or 'lb3', got {kind!r}")


@dataclass(frozen=True)
class TraceRecord:
    response_len: int
    row: int | None = None


@dataclass
class LoadReport:
    accepted: int = 0
    skipped_too_long: int = 0
    skipped_rows: list[int] = field(default_factory=list)


def read_trace(path: str | Path) -> list[TraceRecord]:
    """Parse a trace: one integer per line (``#`` comments allowed) or CSV with ``response_len``."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    first = next((ln for ln in lines if ln.strip() and not ln.lstrip().startswith("#")), "")
    if "response_len" in first:
        return _read_csv(text)
    out = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            value = int(line)
        except ValueError:
            raise ParseError(lineno, raw) from None
        if value < 1:
            raise ParseError(lineno, raw)
        out.append(TraceRecord(value, lineno))
    return out


def _read_csv(text: str) -> list[TraceRecord]:
    body = [ln for ln in text.splitlines() if not ln.lstrip().startswith("#")]
    reader = csv.DictReader(io.StringIO("\n".join(body)))
    out = []
    for rowno, row in enumerate(reader, start=2):
        raw = (row.get("response_len") or "").strip()
        try:
            value = int(raw)
        except ValueError:
            raise ParseError(rowno, raw) from None
        if value < 1:
            raise ParseError(rowno, raw)
        out.append(TraceRecord(value, rowno))
    return out


def load_trace(path: str | Path, s: int, M: int, limit: int | None = None,
               report: LoadReport | None = None) -> Instance:
    """First ``limit`` records that fit ``M - s``, in file order.

    Records longer than ``M - s`` are skipped and counted in ``report``.
    """
    records = read_trace(path)
    rep = report if report is not None else LoadReport()
    cap = M - s
    lengths = []
    for rec in records:
        if limit is not None and len(lengths) >= limit:
            break
        if rec.response_len > cap:
            rep.skipped_too_long += 1
            rep.skipped_rows.append(rec.row if rec.row is not None else -1)
            continue
        lengths.append(rec.response_len)
    rep.accepted = len(lengths)
    if not lengths:
        raise AllRecordsInfeasible(f"no record of {path} fits M - s = {cap}")
    return validate_instance(Instance.from_lengths(s, M, lengths))


def round_pow2(inst: Instance) -> Instance:
    """Round every response length up to a power of two."""
    rounded = [1 << (o - 1).bit_length() for o in inst.lengths]
    for i, o in enumerate(rounded):
        if inst.prompt_len + o > inst.memory_budget:
            raise InfeasibleJob(i, f"rounded length {o} exceeds M - s = {inst.memory_budget - inst.prompt_len}")
    return validate_instance(inst.with_lengths(rounded))
