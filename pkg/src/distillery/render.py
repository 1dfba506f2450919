"""Deterministic schedule renderers.

Time runs left to right, wires bottom to top. Successful distillations are
green, failed ones red, circuit boxes blue, pooled holds amber. Output is a
pure function of the schedule: two renders of the same input are
byte-identical, so the SVG is written by hand rather than through a plotting
library.
"""

from __future__ import annotations

from .layout import Metrics, Placement, Schedule, Tag, metrics

_FILL = {
    Tag.CIRCUIT_OP: "#4878a8",
    Tag.TRIAL_SUCCESS: "#2e8b57",
    Tag.TRIAL_FAIL: "#c0392b",
    Tag.POOLED_HOLD: "#e0a93e",
}

_GLYPH = {
    Tag.CIRCUIT_OP: "#",
    Tag.TRIAL_SUCCESS: "S",
    Tag.TRIAL_FAIL: "x",
    Tag.POOLED_HOLD: ".",
}


def _ordered(s: Schedule) -> list[Placement]:
    return sorted(s.placements, key=lambda p: (p.t0, p.w0, p.t1, p.w1, p.id))


def render_svg(s: Schedule, cell: int = 6, margin: int = 10) -> bytes:
    """SVG document, one rect per placement."""
    m: Metrics = metrics(s)
    width = m.T * cell + 2 * margin
    height = m.S * cell + 2 * margin
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" style="background:#ffffff">',
    ]
    for p in _ordered(s):
        x = margin + p.t0 * cell
        # wire 0 at the bottom
        y = margin + (m.S - p.w1) * cell
        w = p.duration * cell
        h = p.width * cell
        label = f"{p.tag.value} {p.op_id}" if p.op_id is not None else p.tag.value
        lines.append(
            f'<rect x="{x}" y="{y}" width="{w}" height="{h}" '
            f'fill="{_FILL[p.tag]}" stroke="#222222" stroke-width="1">'
            f"<title>{label} t={p.t0}..{p.t1} w={p.w0}..{p.w1}</title></rect>"
        )
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode()


def render_ascii(s: Schedule) -> bytes:
    """Character grid; top line is the highest wire."""
    m = metrics(s)
    if m.T == 0 or m.S == 0:
        return b"(empty schedule)\n"
    grid = [[" "] * m.T for _ in range(m.S)]
    for p in _ordered(s):
        glyph = _GLYPH[p.tag]
        for w in range(p.w0, p.w1):
            row = grid[w]
            for t in range(p.t0, p.t1):
                row[t] = glyph
    lines = ["".join(grid[w]) for w in range(m.S - 1, -1, -1)]
    return ("\n".join(lines) + "\n").encode()


def render(s: Schedule, fmt: str) -> bytes:
    if fmt == "svg":
        return render_svg(s)
    if fmt == "ascii":
        return render_ascii(s)
    raise ValueError(f"unknown render format {fmt!r}")
