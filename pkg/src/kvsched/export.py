"""CSV and JSON serialization for instances, timelines and run summaries."""
from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, TextIO

from .errors import ParseError
from .model import Instance, Timeline, memory_profile

TIMELINE_HEADER = ["t", "active_ids", "mem_used", "killed_ids"]
COMPLETIONS_HEADER = ["job_id", "response_len", "completion_round"]
BOUNDS_HEADER = [
    "instance_id", "alpha", "beta", "k_min", "opt_lb", "gba_flow", "gba_ub",
    "gsa_flow", "gsa_ub", "gamma_gba", "gamma_gsa",
]


def _ids(ids: Iterable[int]) -> str:
    return ";".join(str(i) for i in ids)


def _parse_ids(field: str, line: int) -> list[int]:
    field = field.strip()
    if not field:
        return []
    try:
        return [int(x) for x in field.split(";")]
    except ValueError:
        raise ParseError(line, field) from None


def fmt(value) -> str:
    """Render numbers for CSV: exact ints, rationals as decimals with 6 places."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{float(value):.6f}"
    if isinstance(value, float):
        return f"{value:.6f}"
    return "" if value is None else str(value)


def write_timeline(tl: Timeline, inst: Instance, out: TextIO) -> None:
    """One row per round: active ids, memory used, and jobs killed that round."""
    kills: dict[int, list[int]] = {}
    for t, i in tl.kills:
        kills.setdefault(t, []).append(i)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(TIMELINE_HEADER)
    for t, (batch, mem) in enumerate(zip(tl.rounds, memory_profile(tl, inst))):
        w.writerow([t, _ids(batch), mem, _ids(sorted(kills.get(t, ())))])


def read_timeline(src: TextIO, inst: Instance) -> Timeline:
    """Rebuild a timeline from its CSV export by replaying progress.

    Progress is reconstructed from batch membership and the kill column, so
    a timeline written by ``write_timeline`` round-trips exactly.
    """
    reader = csv.reader(src)
    header = next(reader, None)
    if header is None or header[:3] != TIMELINE_HEADER[:3]:
        raise ParseError(1, ",".join(header or []))
    lengths = inst.lengths
    u: dict[int, int] = {}
    rounds, progress, kills = [], [], []
    completions: list[int | None] = [None] * inst.n
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) < 3:
            raise ParseError(lineno, ",".join(row))
        try:
            t = int(row[0])
        except ValueError:
            raise ParseError(lineno, row[0]) from None
        if t != len(rounds):
            raise ParseError(lineno, f"expected round {len(rounds)}, got {t}")
        batch = tuple(_parse_ids(row[1], lineno))
        killed = _parse_ids(row[3], lineno) if len(row) > 3 else []
        for i in batch:
            if not 0 <= i < inst.n:
                raise ParseError(lineno, f"unknown job id {i}")
        for i in killed:
            kills.append((t, i))
            u.pop(i, None)
        cur = {i: u.get(i, 0) for i in batch}
        rounds.append(batch)
        progress.append(tuple(cur[i] for i in batch))
        u = {}
        for i, p in cur.items():
            if p + 1 == lengths[i]:
                completions[i] = t + 1
            else:
                u[i] = p + 1
    return Timeline(tuple(rounds), tuple(progress), tuple(completions), tuple(kills))


def write_completions(tl: Timeline, inst: Instance, out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(COMPLETIONS_HEADER)
    for job, c in zip(inst.jobs, tl.completions):
        w.writerow([job.id, job.response_len, "" if c is None else c])


def write_rows(rows: list[Mapping[str, object]], out: TextIO, header: list[str] | None = None) -> None:
    """Write dict rows as CSV; the header defaults to first-seen key order."""
    if header is None:
        header = []
        for row in rows:
            header.extend(k for k in row if k not in header)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(row.get(k)) for k in header])


def instance_to_json(inst: Instance) -> str:
    return json.dumps(
        {"prompt_len": inst.prompt_len, "memory_budget": inst.memory_budget,
         "response_lens": list(inst.lengths)},
        indent=1,
    )


def instance_from_json(text: str) -> Instance:
    try:
        data = json.loads(text)
        return Instance.from_lengths(data["prompt_len"], data["memory_budget"], data["response_lens"])
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(0, f"bad instance JSON: {exc}") from None


def save_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(instance_to_json(inst) + "\n", encoding="utf-8")


def load_instance(path: str | Path) -> Instance:
    return instance_from_json(Path(path).read_text(encoding="utf-8"))
