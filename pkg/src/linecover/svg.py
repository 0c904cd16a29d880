"""Minimal hand-written SVG output (no plotting dependency)."""

from __future__ import annotations

import math
from typing import Sequence

W, H, PAD = 640, 400, 50


def _frame(xs: Sequence[float], ys: Sequence[float]):
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def sx(x):
        return PAD + (x - x0) / (x1 - x0) * (W - 2 * PAD)

    def sy(y):
        return H - PAD - (y - y0) / (y1 - y0) * (H - 2 * PAD)

    return sx, sy, (x0, x1, y0, y1)


def _poly(pts, colour: str, width: float = 1.5, closed: bool = False) -> str:
    tag = "polygon" if closed else "polyline"
    coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
    return f'<{tag} points="{coords}" fill="none" stroke="{colour}" stroke-width="{width}"/>'


def _doc(body: list[str]) -> str:
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">'
    return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>', *body, "</svg>"]) + "\n"


def ratio_plot(rows: Sequence[dict]) -> str:
    """Greedy/witness ratio per k against the curve ln(k+1) - 2."""
    ks = [r["k"] for r in rows]
    ratios = [float(r["ratio"]) for r in rows]
    bounds = [math.log(k + 1) - 2 for k in ks]
    sx, sy, (x0, x1, y0, y1) = _frame(ks, ratios + bounds)
    body = [
        _poly([(sx(x0), sy(y0)), (sx(x1), sy(y0))], "black", 1),
        _poly([(sx(x0), sy(y0)), (sx(x0), sy(y1))], "black", 1),
        f'<text x="{W / 2:.0f}" y="{H - 12}" text-anchor="middle" font-size="13">k</text>',
        f'<text x="{sx(x0) - 6:.1f}" y="{sy(y1):.1f}" text-anchor="end" font-size="11">{y1:.2f}</text>',
        f'<text x="{sx(x0) - 6:.1f}" y="{sy(y0):.1f}" text-anchor="end" font-size="11">{y0:.2f}</text>',
        f'<text x="{sx(x1):.1f}" y="{sy(y0) + 16:.1f}" text-anchor="middle" font-size="11">{x1}</text>',
        f'<text x="{sx(x0):.1f}" y="{sy(y0) + 16:.1f}" text-anchor="middle" font-size="11">{x0}</text>',
        _poly([(sx(k), sy(v)) for k, v in zip(ks, ratios)], "#1f4e9c", 2),
        _poly([(sx(k), sy(v)) for k, v in zip(ks, bounds)], "#b22222", 1.5),
        f'<text x="{W - PAD:.0f}" y="{PAD - 20}" text-anchor="end" font-size="12" fill="#1f4e9c">greedy / witness</text>',
        f'<text x="{W - PAD:.0f}" y="{PAD - 6}" text-anchor="end" font-size="12" fill="#b22222">ln(k+1) - 2</text>',
    ]
    return _doc(body)


def tour_plot(points: Sequence, tour_vertices: Sequence = ()) -> str:
    """Points as dots, and the closed tour if given."""
    allp = [(float(p[0]), float(p[1])) for p in list(points) + list(tour_vertices)]
    xs, ys = [p[0] for p in allp], [p[1] for p in allp]
    sx, sy, _ = _frame(xs, ys)
    body = []
    if tour_vertices:
        body.append(_poly([(sx(float(v[0])), sy(float(v[1]))) for v in tour_vertices],
                          "#1f4e9c", 1.5, closed=True))
    for p in points:
        body.append(f'<circle cx="{sx(float(p[0])):.2f}" cy="{sy(float(p[1])):.2f}" r="3" fill="#b22222"/>')
    return _doc(body)
