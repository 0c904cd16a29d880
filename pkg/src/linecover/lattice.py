"""Smallest nonzero turning angle among points of the integer grid [0, N]^2."""

from __future__ import annotations

from fractions import Fraction

import mpmath
import numpy as np

from .geometry import Point, TurnMeasure

__all__ = ["lattice_min_turn", "lattice_min_turn_brute", "lattice_bound_ok", "lattice_report_row"]


def _fits(span_lo: np.ndarray, span_hi: np.ndarray, N: int) -> np.ndarray:
    return span_hi - span_lo <= N


def lattice_min_turn(N: int) -> tuple[TurnMeasure, tuple[Point, Point, Point]]:
    """Minimum turn over ordered non-collinear lattice triples, with a witness.

    A triple (a, b, c) is determined up to translation by the steps
    ``u = b - a`` and ``v = c - b``; it fits in the grid iff, per axis, the
    values ``0, -u, v`` span at most ``N``.  All step pairs are scanned in
    numpy, and the float-best candidates are re-ranked exactly.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    r = np.arange(-N, N + 1, dtype=np.int64)
    vx, vy = (g.ravel() for g in np.meshgrid(r, r, indexing="ij"))
    nz = (vx != 0) | (vy != 0)
    vx, vy = vx[nz], vy[nz]
    vn = vx * vx + vy * vy
    best_key, best = None, None
    for ux, uy in zip(vx.tolist(), vy.tolist()):
        lo_x = np.minimum(np.minimum(0, -ux), vx)
        hi_x = np.maximum(np.maximum(0, -ux), vx)
        lo_y = np.minimum(np.minimum(0, -uy), vy)
        hi_y = np.maximum(np.maximum(0, -uy), vy)
        cross = ux * vy - uy * vx
        ok = _fits(lo_x, hi_x, N) & _fits(lo_y, hi_y, N) & (cross != 0)
        if not ok.any():
            continue
        # interior vectors are -u and v: dot = -(u.v)
        dot = -(ux * vx + uy * vy)
        un = ux * ux + uy * uy
        keyf = np.where(dot > 0, 1.0, -1.0) * (dot.astype(float) ** 2) / (un * vn)
        keyf = np.where(ok, keyf, np.inf)
        m = keyf.min()
        if best_key is not None and m > float(best_key.key) + 1e-9:
            continue
        for j in np.nonzero(keyf <= m + 1e-9)[0].tolist():
            tm = TurnMeasure(int(dot[j]), int(cross[j]), un, int(vn[j]))
            if best_key is None or tm < best_key:
                best_key, best = tm, (ux, uy, int(vx[j]), int(vy[j]))
    if best is None:
        raise ValueError("no non-collinear triple")
    ux, uy, wx, wy = best
    bx = -min(0, -ux, wx)
    by = -min(0, -uy, wy)
    a = Point(Fraction(bx - ux), Fraction(by - uy))
    b = Point(Fraction(bx), Fraction(by))
    c = Point(Fraction(bx + wx), Fraction(by + wy))
    return best_key, (a, b, c)


def lattice_min_turn_brute(N: int) -> TurnMeasure:
    """Direct scan of all ordered triples; only for small N."""
    pts = [Point(Fraction(x), Fraction(y)) for x in range(N + 1) for y in range(N + 1)]
    best = None
    for a in pts:
        for b in pts:
            if a == b:
                continue
            for c in pts:
                if c == b or c == a:
                    continue
                tm = TurnMeasure.from_points(a, b, c)
                if tm.kind != "proper":
                    continue
                if best is None or tm < best:
                    best = tm
    return best


def lattice_bound_ok(tm: TurnMeasure, N: int) -> bool:
    with mpmath.workdps(60):
        return tm.cmp_radians(Fraction(1, 3 * N * N)) >= 0


def lattice_report_row(N: int) -> dict:
    tm, _ = lattice_min_turn(N)
    return {
        "N": N,
        "min_turn_num": mpmath.nstr(tm.mp_radians(), 20),
        "min_turn_denom_bound": 3 * N * N,
        "bound_ok": lattice_bound_ok(tm, N),
    }
