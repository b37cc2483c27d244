"""Deterministic SVG rendering of planar upper sets.

Sets are drawn back to front as clipped polygons with vertex dots, in
the style of gain/working-time diagrams: the first (loss) axis can be
negated for display so that gain grows to the right.  All geometry stays
exact until the final coordinate formatting, which uses fixed two-digit
output so identical inputs yield identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .polyhedra import Polyhedron, box, intersect
from .rational import Rat

PALETTE = (
    "#c8c8c8",
    "#d9706f",
    "#e0a050",
    "#b8b84a",
    "#6f94d9",
    "#9a6fd9",
    "#5fb890",
)


@dataclass(frozen=True)
class View:
    negate_axis_1: bool = True
    clip: Optional[tuple] = None  # ((min0, min1), (max0, max1)) storage coords
    width: int = 560
    height: int = 420


def _auto_clip(sets):
    xs, ys = [], []
    for _, s in sets:
        for v in s.vertices:
            xs.append(v[0])
            ys.append(v[1])
    xs += [Rat(0)]
    ys += [Rat(0)]
    lo0, hi0 = min(xs), max(xs)
    lo1, hi1 = min(ys), max(ys)
    pad0 = (hi0 - lo0) / 6 + 10
    pad1 = (hi1 - lo1) / 6 + 10
    return ((lo0 - pad0, lo1 - pad1), (hi0 + pad0, hi1 + pad1))


def _tick_step(span: float) -> float:
    if span <= 0:
        return 1.0
    raw = span / 5
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 5, 10):
        if mult * mag >= raw:
            return mult * mag
    return 10 * mag


def _fmt(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _ring(poly: Polyhedron):
    """Vertices of a bounded 2-d polytope in boundary order."""
    verts = poly.vertices
    if len(verts) <= 2:
        return list(verts)
    cx = sum(float(v[0]) for v in verts) / len(verts)
    cy = sum(float(v[1]) for v in verts) / len(verts)
    return sorted(
        verts, key=lambda v: math.atan2(float(v[1]) - cy, float(v[0]) - cx)
    )


def export_svg(sets, view: View = None) -> str:
    """Render labeled upper sets back-to-front; byte-stable output.

    ``sets`` is an ordered list of (label, UpperSet); the first entry is
    drawn in the rear.  Only two-objective sets can be rendered.
    """
    if not sets:
        raise ValueError("nothing to render")
    for _, s in sets:
        if s.dim != 2:
            raise ValueError("SVG export requires two objectives")
    view = view or View()
    clip = view.clip or _auto_clip(sets)
    (lo0, lo1), (hi0, hi1) = clip
    lo0, lo1, hi0, hi1 = Rat(lo0), Rat(lo1), Rat(hi0), Rat(hi1)
    clip_poly = box((lo0, lo1), (hi0, hi1))

    # display transform: storage (loss, time) -> data coords
    def disp(v):
        x = -v[0] if view.negate_axis_1 else v[0]
        return float(x), float(v[1])

    dx_lo, dx_hi = sorted((disp((lo0, lo1))[0], disp((hi0, hi1))[0]))
    dy_lo, dy_hi = float(lo1), float(hi1)
    margin_l, margin_b, margin_t, margin_r = 62.0, 46.0, 16.0, 16.0
    plot_w = view.width - margin_l - margin_r
    plot_h = view.height - margin_t - margin_b

    def to_screen(p):
        x, y = p
        sx = margin_l + (x - dx_lo) / (dx_hi - dx_lo) * plot_w
        sy = view.height - margin_b - (y - dy_lo) / (dy_hi - dy_lo) * plot_h
        return sx, sy

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{view.width}" '
        f'height="{view.height}" viewBox="0 0 {view.width} {view.height}">'
    )
    out.append('<rect width="100%" height="100%" fill="white"/>')

    # axes with ticks
    step_x = _tick_step(dx_hi - dx_lo)
    step_y = _tick_step(dy_hi - dy_lo)
    axis_y = view.height - margin_b
    out.append(
        f'<line x1="{_fmt(margin_l)}" y1="{_fmt(axis_y)}" '
        f'x2="{_fmt(view.width - margin_r)}" y2="{_fmt(axis_y)}" '
        'stroke="#333" stroke-width="1"/>'
    )
    out.append(
        f'<line x1="{_fmt(margin_l)}" y1="{_fmt(margin_t)}" '
        f'x2="{_fmt(margin_l)}" y2="{_fmt(axis_y)}" '
        'stroke="#333" stroke-width="1"/>'
    )
    t = math.ceil(dx_lo / step_x) * step_x
    while t <= dx_hi + 1e-9:
        sx, _ = to_screen((t, dy_lo))
        out.append(
            f'<line x1="{_fmt(sx)}" y1="{_fmt(axis_y)}" x2="{_fmt(sx)}" '
            f'y2="{_fmt(axis_y + 4)}" stroke="#333" stroke-width="1"/>'
        )
        label = f"{t:g}"
        out.append(
            f'<text x="{_fmt(sx)}" y="{_fmt(axis_y + 16)}" font-size="10" '
            f'text-anchor="middle" fill="#333">{label}</text>'
        )
        t += step_x
    t = math.ceil(dy_lo / step_y) * step_y
    while t <= dy_hi + 1e-9:
        _, sy = to_screen((dx_lo, t))
        out.append(
            f'<line x1="{_fmt(margin_l - 4)}" y1="{_fmt(sy)}" '
            f'x2="{_fmt(margin_l)}" y2="{_fmt(sy)}" stroke="#333" '
            'stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt(margin_l - 7)}" y="{_fmt(sy + 3)}" font-size="10" '
            f'text-anchor="end" fill="#333">{t:g}</text>'
        )
        t += step_y
    xlabel = "gain (€)" if view.negate_axis_1 else "objective 1"
    ylabel = "work time (minutes)" if view.negate_axis_1 else "objective 2"
    out.append(
        f'<text x="{_fmt(margin_l + plot_w / 2)}" y="{_fmt(view.height - 10)}" '
        f'font-size="11" text-anchor="middle" fill="#333">{xlabel}</text>'
    )
    out.append(
        f'<text x="14" y="{_fmt(margin_t + plot_h / 2)}" font-size="11" '
        f'text-anchor="middle" fill="#333" '
        f'transform="rotate(-90 14 {_fmt(margin_t + plot_h / 2)})">{ylabel}</text>'
    )

    # polygons, rear to front
    legend = []
    for idx, (label, s) in enumerate(sets):
        color = PALETTE[idx % len(PALETTE)]
        legend.append((label, color))
        if s.is_empty:
            continue
        clipped = intersect(s, clip_poly)
        if clipped.is_empty:
            continue
        ring = _ring(clipped)
        pts = " ".join(
            f"{_fmt(px)},{_fmt(py)}"
            for px, py in (to_screen(disp(v)) for v in ring)
        )
        out.append(
            f'<polygon points="{pts}" fill="{color}" fill-opacity="0.75" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        for v in s.vertices:
            if clip_poly.contains_point(v):
                px, py = to_screen(disp(v))
                out.append(
                    f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="2.6" '
                    'fill="#222"/>'
                )
    for i, (label, color) in enumerate(legend):
        ly = margin_t + 6 + 15 * i
        lx = view.width - margin_r - 140
        out.append(
            f'<rect x="{_fmt(lx)}" y="{_fmt(ly - 8)}" width="10" height="10" '
            f'fill="{color}" fill-opacity="0.75"/>'
        )
        out.append(
            f'<text x="{_fmt(lx + 14)}" y="{_fmt(ly)}" font-size="10" '
            f'fill="#333">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
