"""Greedy and exact solvers for the point/line covering problems.

Greedy ties are broken by the smallest canonical ``(a, b, c)`` for lines and
the smallest ``(x, y)`` for points, so every trace is reproducible.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from . import _setsystem as ss
from .geometry import Line, Point, as_point, fresh_line_through, line_through, on_line
from .instances import (CoverSolution, LineSetInstance, PointSetInstance,
                        SegmentSetInstance)

__all__ = [
    "SizeGuardError",
    "DEFAULT_POINT_GUARD",
    "DEFAULT_LINE_GUARD",
    "line_candidates",
    "point_candidates_for_lines",
    "point_candidates_for_segments",
    "greedy_cover_points_by_lines",
    "exact_cover_points_by_lines",
    "greedy_max_coverage",
    "exact_max_coverage",
    "greedy_cover_lines_by_points",
    "exact_cover_lines_by_points",
    "greedy_cover_segments_by_points",
    "verify_point_cover",
]

DEFAULT_POINT_GUARD = 24
DEFAULT_LINE_GUARD = 20


class SizeGuardError(ValueError):
    pass


def _points(P) -> list[Point]:
    if isinstance(P, PointSetInstance):
        return list(P.points)
    return [as_point(p) for p in P]


def _lines(L) -> list[Line]:
    if isinstance(L, LineSetInstance):
        return list(L.lines)
    return [Line.from_coeffs(*l) for l in L]


def _segments(S) -> list[tuple[Point, Point]]:
    if isinstance(S, SegmentSetInstance):
        return list(S.segments)
    return [(as_point(s), as_point(t)) for s, t in S]


def line_candidates(P) -> tuple[list[Line], list[int]]:
    """Lines of L_P with their incidence masks, plus fallback one-point lines.

    A point lying on no line of L_P (only possible when |P| = 1) gets a line
    through it that misses every other point.
    """
    pts = _points(P)
    groups: dict[Line, int] = {}
    for (i, p), (j, q) in combinations(enumerate(pts), 2):
        ln = line_through(p, q)
        groups[ln] = groups.get(ln, 0) | (1 << i) | (1 << j)
    lines = sorted(groups)
    masks = [groups[l] for l in lines]
    seen = 0
    for m in masks:
        seen |= m
    for i, p in enumerate(pts):
        if not seen >> i & 1:
            lines.append(fresh_line_through(p, pts))
            masks.append(1 << i)
    return lines, masks


def _hom_key(h: tuple[int, int, int]) -> tuple[Fraction, Fraction]:
    X, Y, W = h
    return Fraction(X, W), Fraction(Y, W)


def _hom_point(h: tuple[int, int, int]) -> Point:
    return Point(*_hom_key(h))


def _normalize_hom(X: int, Y: int, W: int) -> tuple[int, int, int]:
    g = math.gcd(math.gcd(X, Y), W)
    if W < 0:
        g = -g
    return X // g, Y // g, W // g


def point_candidates_for_lines(L) -> tuple[list[Point], list[int]]:
    """All pairwise intersection points with incidence masks.

    Lines parallel to every other line get one fallback point of their own.
    Points are sorted by ``(x, y)``.
    """
    lines = _lines(L)
    groups: dict[tuple[int, int, int], int] = {}
    for (i, l1), (j, l2) in combinations(enumerate(lines), 2):
        W = l1.a * l2.b - l2.a * l1.b
        if W == 0:
            continue
        h = _normalize_hom(l1.c * l2.b - l2.c * l1.b, l1.a * l2.c - l2.a * l1.c, W)
        groups[h] = groups.get(h, 0) | (1 << i) | (1 << j)
    pts = [_hom_point(h) for h in groups]
    masks = list(groups.values())
    order = sorted(range(len(pts)), key=lambda t: pts[t])
    pts = [pts[t] for t in order]
    masks = [masks[t] for t in order]
    seen = 0
    for m in masks:
        seen |= m
    for i, ln in enumerate(lines):
        if not seen >> i & 1:
            p = (Point(Fraction(0), Fraction(ln.c, ln.b)) if ln.b
                 else Point(Fraction(ln.c, ln.a), Fraction(0)))
            pts.append(p)
            masks.append(1 << i)
    return pts, masks


_INT64_COORD_LIMIT = 1 << 18


def _segment_groups_numpy(seg: np.ndarray):
    """Transversal segment intersections via exact int64 arithmetic.

    Returns ``(homs, masks, same_line)``: normalized homogeneous points as an
    ``(m, 3)`` array, their incidence masks, and the index pairs lying on a
    common line.
    """
    n = len(seg)
    px, py, qx, qy = seg[:, 0], seg[:, 1], seg[:, 2], seg[:, 3]
    a = qy - py
    b = px - qx
    c = a * px + b * py
    ii, jj = np.triu_indices(n, 1)
    W = a[ii] * b[jj] - a[jj] * b[ii]
    nz = W != 0
    col = ~nz & (a[ii] * px[jj] + b[ii] * py[jj] == c[ii])
    same_line = list(zip(ii[col].tolist(), jj[col].tolist()))
    i, j, W = ii[nz], jj[nz], W[nz]
    X = c[i] * b[j] - c[j] * b[i]
    Y = a[i] * c[j] - a[j] * c[i]
    sg = np.sign(W)
    X, Y, W = X * sg, Y * sg, W * sg
    lox, hix = np.minimum(px, qx), np.maximum(px, qx)
    loy, hiy = np.minimum(py, qy), np.maximum(py, qy)
    ok = np.ones(len(W), dtype=bool)
    for idx in (i, j):
        ok &= (X >= lox[idx] * W) & (X <= hix[idx] * W)
        ok &= (Y >= loy[idx] * W) & (Y <= hiy[idx] * W)
    i, j, X, Y, W = i[ok], j[ok], X[ok], Y[ok], W[ok]
    g = np.gcd(np.gcd(X, Y), W)
    X, Y, W = X // g, Y // g, W // g
    order = np.lexsort((W, Y, X))
    i, j, X, Y, W = i[order], j[order], X[order], Y[order], W[order]
    if len(X) == 0:
        return np.zeros((0, 3), dtype=np.int64), [], same_line
    new = np.ones(len(X), dtype=bool)
    new[1:] = (X[1:] != X[:-1]) | (Y[1:] != Y[:-1]) | (W[1:] != W[:-1])
    starts = np.flatnonzero(new)
    ends = np.append(starts[1:], len(X))
    sizes = ends - starts
    il, jl = i.tolist(), j.tolist()
    masks = [(1 << il[s]) | (1 << jl[s]) for s in starts.tolist()]
    for gi in np.flatnonzero(sizes > 1).tolist():
        m = 0
        for t in range(int(starts[gi]), int(ends[gi])):
            m |= (1 << il[t]) | (1 << jl[t])
        masks[gi] = m
    homs = np.stack([X[starts], Y[starts], W[starts]], axis=1)
    return homs, masks, same_line


def _segment_groups_python(seg: list[tuple[int, int, int, int]]):
    groups: dict[tuple[int, int, int], int] = {}
    same_line: list[tuple[int, int]] = []
    coef = []
    for px, py, qx, qy in seg:
        a, b = qy - py, px - qx
        coef.append((a, b, a * px + b * py))
    for i, j in combinations(range(len(seg)), 2):
        a1, b1, c1 = coef[i]
        a2, b2, c2 = coef[j]
        W = a1 * b2 - a2 * b1
        if W == 0:
            if a1 * seg[j][0] + b1 * seg[j][1] == c1:
                same_line.append((i, j))
            continue
        X, Y, W = _normalize_hom(c1 * b2 - c2 * b1, a1 * c2 - a2 * c1, W)
        inside = True
        for px, py, qx, qy in (seg[i], seg[j]):
            if not (min(px, qx) * W <= X <= max(px, qx) * W
                    and min(py, qy) * W <= Y <= max(py, qy) * W):
                inside = False
                break
        if inside:
            h = (X, Y, W)
            groups[h] = groups.get(h, 0) | (1 << i) | (1 << j)
    return groups, same_line


def _on_closed_segment(p: Point, s: Point, t: Point) -> bool:
    from .geometry import on_segment
    return on_segment(p, s, t)


def point_candidates_for_segments(S) -> tuple[list, list[int]]:
    """Candidate stabbing points for segments with their incidence masks.

    Candidates are pairwise intersections (overlap endpoints for collinear
    overlapping pairs) plus one endpoint of every segment meeting no other.
    The returned point list is lazy: entry ``t`` is a homogeneous integer
    triple ``(X, Y, W)`` for the point ``(X/W, Y/W)``.
    """
    segs = _segments(S)
    den = 1
    for s, t in segs:
        for v in (s.x, s.y, t.x, t.y):
            den = math.lcm(den, v.denominator)
    iseg = [(int(s.x * den), int(s.y * den), int(t.x * den), int(t.y * den)) for s, t in segs]
    big = max((abs(v) for row in iseg for v in row), default=0)
    if big < _INT64_COORD_LIMIT and len(iseg) > 64:
        homs, nmasks, same_line = _segment_groups_numpy(np.array(iseg, dtype=np.int64))
        groups = {}
        base_homs, base_masks = homs, nmasks
    else:
        groups, same_line = _segment_groups_python(iseg)
        base_homs, base_masks = None, []
    # collinear overlapping pairs: overlap endpoints, incidence recounted exactly
    extra: set[Point] = set()
    for i, j in same_line:
        (s1, t1), (s2, t2) = segs[i], segs[j]
        ends = [p for p in (s1, t1) if _on_closed_segment(p, s2, t2)]
        ends += [p for p in (s2, t2) if _on_closed_segment(p, s1, t1)]
        extra.update(ends)
    for p in extra:
        sx, sy = p.x * den, p.y * den
        w = math.lcm(sx.denominator, sy.denominator)
        h = _normalize_hom(int(sx * w), int(sy * w), w)
        mask = 0
        for k, (s, t) in enumerate(segs):
            if _on_closed_segment(p, s, t):
                mask |= 1 << k
        groups[h] = groups.get(h, 0) | mask
    # overlap points may coincide with an array entry; their exact mask wins
    if base_homs is not None and groups:
        index = {tuple(int(v) for v in base_homs[t]): t for t in range(len(base_homs))}
        for h, m in list(groups.items()):
            t = index.get(h)
            if t is not None:
                base_masks[t] |= m
                del groups[h]
    tail_keys = list(groups)
    masks = list(base_masks) + list(groups.values())
    seen = 0
    for m in masks:
        seen |= m
    for i, (px, py, _, _) in enumerate(iseg):
        if not seen >> i & 1:
            tail_keys.append((px, py, 1))
            masks.append(1 << i)
    return _HomList(base_homs, tail_keys, den), masks


class _HomList:
    """Homogeneous points ``(X, Y, W)`` in original coordinates, decoded lazily."""

    def __init__(self, arr, tail, den):
        self._arr = arr
        self._n = 0 if arr is None else len(arr)
        self._tail = tail
        self._den = den

    def __len__(self):
        return self._n + len(self._tail)

    def __getitem__(self, t):
        if t < self._n:
            X, Y, W = (int(v) for v in self._arr[t])
        else:
            X, Y, W = self._tail[t - self._n]
        return X, Y, W * self._den


def _solution_from_masks(chosen_objs, chosen_masks, optimal=None, **info) -> CoverSolution:
    cov = 0
    for m in chosen_masks:
        cov |= m
    covered = frozenset(i for i in range(cov.bit_length()) if cov >> i & 1)
    return CoverSolution(list(chosen_objs), covered, optimal, dict(info))


def greedy_cover_points_by_lines(P) -> CoverSolution:
    pts = _points(P)
    if not pts:
        raise ValueError("empty point set")
    lines, masks = line_candidates(pts)
    universe = (1 << len(pts)) - 1
    pick = ss.greedy(masks, universe, key=lambda i: tuple(lines[i]))
    return _solution_from_masks([lines[i] for i in pick], [masks[i] for i in pick])


def _guard(n: int, guard: int | None, what: str) -> None:
    if guard is not None and n > guard:
        raise SizeGuardError(f"{n} {what} exceed the exact-solver guard of {guard}")


def exact_cover_points_by_lines(P, node_cap: int | None = None,
                                guard: int | None = DEFAULT_POINT_GUARD) -> CoverSolution:
    """Minimum line cover by branch and bound seeded with the greedy cover.

    When ``node_cap`` is hit the best cover found so far is returned with
    ``optimal=False``.
    """
    pts = _points(P)
    _guard(len(pts), guard, "points")
    lines, masks = line_candidates(pts)
    universe = (1 << len(pts)) - 1
    incumbent = ss.greedy(masks, universe, key=lambda i: tuple(lines[i]))
    res = ss.exact_cover(masks, universe, incumbent, node_cap)
    return _solution_from_masks([lines[i] for i in res.chosen], [masks[i] for i in res.chosen],
                                res.optimal, nodes=res.nodes)


def greedy_max_coverage(P, k: int) -> CoverSolution:
    if k < 0:
        raise ValueError("k must be non-negative")
    pts = _points(P)
    lines, masks = line_candidates(pts)
    universe = (1 << len(pts)) - 1
    pick = ss.greedy(masks, universe, key=lambda i: tuple(lines[i]), limit=k) if k else []
    return _solution_from_masks([lines[i] for i in pick], [masks[i] for i in pick])


def exact_max_coverage(P, k: int, node_cap: int | None = None,
                       guard: int | None = DEFAULT_POINT_GUARD) -> CoverSolution:
    """``k`` lines covering the most points; ``len(result.covered)`` is x*."""
    if k < 0:
        raise ValueError("k must be non-negative")
    pts = _points(P)
    _guard(len(pts), guard, "points")
    lines, masks = line_candidates(pts)
    universe = (1 << len(pts)) - 1
    incumbent = ss.greedy(masks, universe, key=lambda i: tuple(lines[i]), limit=k) if k else []
    res = ss.exact_max_coverage(masks, universe, k, incumbent, node_cap)
    return _solution_from_masks([lines[i] for i in res.chosen], [masks[i] for i in res.chosen],
                                res.optimal, nodes=res.nodes)


def greedy_cover_lines_by_points(L) -> CoverSolution:
    lines = _lines(L)
    if not lines:
        raise ValueError("empty line set")
    pts, masks = point_candidates_for_lines(lines)
    universe = (1 << len(lines)) - 1
    # candidates are pre-sorted by (x, y), so index order is the tie-break
    pick = ss.greedy(masks, universe)
    return _solution_from_masks([pts[i] for i in pick], [masks[i] for i in pick])


def exact_cover_lines_by_points(L, node_cap: int | None = None,
                                guard: int | None = DEFAULT_LINE_GUARD) -> CoverSolution:
    lines = _lines(L)
    _guard(len(lines), guard, "lines")
    pts, masks = point_candidates_for_lines(lines)
    universe = (1 << len(lines)) - 1
    incumbent = ss.greedy(masks, universe)
    res = ss.exact_cover(masks, universe, incumbent, node_cap)
    return _solution_from_masks([pts[i] for i in res.chosen], [masks[i] for i in res.chosen],
                                res.optimal, nodes=res.nodes)


def greedy_cover_segments_by_points(S) -> CoverSolution:
    segs = _segments(S)
    if not segs:
        raise ValueError("empty segment set")
    homs, masks = point_candidates_for_segments(segs)
    universe = (1 << len(segs)) - 1
    pick = ss.greedy(masks, universe, key=lambda i: _hom_key(homs[i]))
    return _solution_from_masks([_hom_point(homs[i]) for i in pick], [masks[i] for i in pick])


def verify_point_cover(points: Sequence, lines: Sequence[Line]) -> bool:
    """Exact re-check that every point lies on some line."""
    return all(any(on_line(as_point(p), l) for l in lines) for p in points)
