"""Stacked memory-usage chart as standalone SVG.

Each round is a column; every active job contributes a block of height
``s + u + 1`` stacked in id order. Runs that end in a kill are drawn with a
dotted pattern. A dashed line marks the budget ``M``.
"""
from __future__ import annotations

from xml.sax.saxutils import escape

from .model import Instance, Timeline

WIDTH = 960
HEIGHT = 400
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 56, 16, 28, 40


def _color(job: int) -> str:
    hue = (job * 137.508) % 360
    return f"hsl({hue:.1f},62%,58%)"


def _ticks(top: int, count: int = 5) -> list[int]:
    if top <= 0:
        return [0]
    step = max(1, -(-top // count))
    mag = 10 ** (len(str(step)) - 1)
    step = -(-step // mag) * mag
    return list(range(0, top + 1, step))


def render_svg(tl: Timeline, inst: Instance, title: str = "") -> str:
    s, M = inst.prompt_len, inst.memory_budget
    rounds = max(len(tl.rounds), 1)
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B
    top = max(M, 1)
    xs = plot_w / rounds
    ys = plot_h / top

    def x(t: float) -> float:
        return MARGIN_L + t * xs

    def y(m: float) -> float:
        return MARGIN_T + plot_h - m * ys

    killed_run: set[tuple[int, int]] = set()  # (job, round) cells belonging to killed runs
    for job, start, end, completed in tl.runs():
        if not completed:
            killed_run.update((job, t) for t in range(start, end))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        "<defs>",
        '<pattern id="dots" width="4" height="4" patternUnits="userSpaceOnUse">'
        '<rect width="4" height="4" fill="white"/><circle cx="2" cy="2" r="0.9" fill="#555"/></pattern>',
        "</defs>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="16" text-anchor="middle">{escape(title)}</text>')

    for t, (batch, us) in enumerate(zip(tl.rounds, tl.progress)):
        base = 0
        for job, u in zip(batch, us):
            h = s + u + 1
            fill = "url(#dots)" if (job, t) in killed_run else _color(job)
            out.append(
                f'<rect x="{x(t):.2f}" y="{y(base + h):.2f}" width="{xs:.2f}" '
                f'height="{h * ys:.2f}" fill="{fill}"/>'
            )
            base += h

    # axes
    x0, y0 = MARGIN_L, MARGIN_T + plot_h
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" stroke="black"/>')
    out.append(f'<line x1="{x0}" y1="{MARGIN_T}" x2="{x0}" y2="{y0}" stroke="black"/>')
    for m in _ticks(top):
        out.append(f'<line x1="{x0 - 4}" y1="{y(m):.2f}" x2="{x0}" y2="{y(m):.2f}" stroke="black"/>')
        out.append(f'<text x="{x0 - 6}" y="{y(m) + 4:.2f}" text-anchor="end">{m}</text>')
    for t in _ticks(len(tl.rounds)):
        out.append(f'<line x1="{x(t):.2f}" y1="{y0}" x2="{x(t):.2f}" y2="{y0 + 4}" stroke="black"/>')
        out.append(f'<text x="{x(t):.2f}" y="{y0 + 16}" text-anchor="middle">{t}</text>')
    out.append(f'<text x="{x0 + plot_w / 2:.1f}" y="{HEIGHT - 6}" text-anchor="middle">round</text>')
    out.append(
        f'<text x="14" y="{MARGIN_T + plot_h / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 14 {MARGIN_T + plot_h / 2:.1f})">memory</text>'
    )
    out.append(
        f'<line class="budget" x1="{x0}" y1="{y(M):.2f}" x2="{x0 + plot_w}" y2="{y(M):.2f}" '
        f'stroke="crimson" stroke-dasharray="6 3"/>'
    )
    out.append(f'<text x="{x0 + plot_w - 2}" y="{y(M) - 4:.2f}" text-anchor="end" fill="crimson">M = {M}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
