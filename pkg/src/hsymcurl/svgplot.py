"""Minimal static log-log plots written as SVG 1.1."""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

COLORS = ("#000000", "#008080", "#1f3fbf", "#b03030")
W, H = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 20, 50


def _decades(lo: float, hi: float) -> tuple[int, int]:
    return math.floor(math.log10(lo)), math.ceil(math.log10(hi))


def loglog_svg(series, path, xlabel="Degrees of freedom", ylabel="error", guides=()):
    """Write a log-log plot.

    ``series`` is a list of ``(label, xs, ys)``; ``guides`` a list of
    ``(label, slope_in_x)`` dashed reference lines anchored at the first point
    of the first series. Non-positive values are dropped.
    """
    pts = [(lab, [(x, y) for x, y in zip(xs, ys) if x > 0 and y > 0]) for lab, xs, ys in series]
    allx = [x for _, p in pts for x, _ in p]
    ally = [y for _, p in pts for _, y in p]
    if not allx:
        raise ValueError("nothing to plot")
    x0, x1 = _decades(min(allx), max(allx))
    y0, y1 = _decades(min(ally), max(ally))
    x1, y1 = max(x1, x0 + 1), max(y1, y0 + 1)

    def px(x):
        return LEFT + (math.log10(x) - x0) / (x1 - x0) * (W - LEFT - RIGHT)

    def py(y):
        return H - BOTTOM - (math.log10(y) - y0) / (y1 - y0) * (H - TOP - BOTTOM)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
    ]
    for d in range(x0, x1 + 1):
        out.append(f'<line x1="{px(10**d):.1f}" y1="{TOP}" x2="{px(10**d):.1f}" y2="{H - BOTTOM}" stroke="#ddd"/>')
        out.append(f'<text x="{px(10**d):.1f}" y="{H - BOTTOM + 18}" font-size="12" text-anchor="middle">1e{d}</text>')
    for d in range(y0, y1 + 1):
        out.append(f'<line x1="{LEFT}" y1="{py(10**d):.1f}" x2="{W - RIGHT}" y2="{py(10**d):.1f}" stroke="#ddd"/>')
        out.append(f'<text x="{LEFT - 6}" y="{py(10**d) + 4:.1f}" font-size="12" text-anchor="end">1e{d}</text>')
    out.append(f'<rect x="{LEFT}" y="{TOP}" width="{W - LEFT - RIGHT}" height="{H - TOP - BOTTOM}" fill="none" stroke="black"/>')
    out.append(f'<text x="{(LEFT + W - RIGHT) / 2}" y="{H - 10}" font-size="13" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="16" y="{(TOP + H - BOTTOM) / 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {(TOP + H - BOTTOM) / 2})">{escape(ylabel)}</text>'
    )

    for k, (lab, p) in enumerate(pts):
        if not p:
            continue
        c = COLORS[k % len(COLORS)]
        coords = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in p)
        out.append(f'<polyline points="{coords}" fill="none" stroke="{c}" stroke-width="1.5"/>')
        out += [f'<circle cx="{px(x):.1f}" cy="{py(y):.1f}" r="3" fill="{c}"/>' for x, y in p]
        out.append(f'<text x="{W - RIGHT - 8}" y="{TOP + 16 * (k + 1)}" font-size="12" fill="{c}" text-anchor="end">{escape(lab)}</text>')

    if pts and pts[0][1]:
        xa, ya = pts[0][1][0]
        xb = max(allx)
        for lab, slope in guides:
            yb = ya * (xb / xa) ** slope
            out.append(
                f'<line x1="{px(xa):.1f}" y1="{py(ya):.1f}" x2="{px(xb):.1f}" y2="{py(yb):.1f}" '
                'stroke="gray" stroke-dasharray="5,4"/>'
            )
            out.append(f'<text x="{px(xb):.1f}" y="{py(yb) - 4:.1f}" font-size="11" fill="gray" text-anchor="end">{escape(lab)}</text>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")
