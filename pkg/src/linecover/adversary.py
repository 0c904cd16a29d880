"""Adversarial instances on which greedy covering loses a logarithmic factor.

``G_k`` is bipartite: ``k`` top vertices ``A`` and blocks ``B_2 .. B_k`` where
``B_i`` holds ``k // i`` vertices of degree ``i`` with disjoint, consecutive
neighbourhoods in ``A``.  It is embedded between the horizontal lines
``y = 1`` (A) and ``y = 0`` (B), either as segments or as full lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .cover import greedy_cover_lines_by_points, greedy_cover_segments_by_points
from .geometry import Line, Point, line_through, on_segment
from .instances import LineSetInstance, PointSetInstance, SegmentSetInstance

__all__ = [
    "BipartiteAdversary",
    "build_gk",
    "embed_segments",
    "embed_lines",
    "find_triple_crossing",
    "greedy_ratio_experiment",
    "dualize",
    "harmonic_b_count",
    "ConstructionError",
]


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class BipartiteAdversary:
    k: int
    blocks: dict[int, tuple[tuple[int, ...], ...]]
    # B vertices in left-to-right order: (block index i, A-neighbourhood)
    b_vertices: tuple[tuple[int, tuple[int, ...]], ...] = field(repr=False)

    @property
    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(a, b)`` with ``b`` the global B index."""
        return [(a, j) for j, (_, nb) in enumerate(self.b_vertices) for a in nb]

    @property
    def n_b(self) -> int:
        return len(self.b_vertices)


def harmonic_b_count(k: int) -> int:
    return sum(k // i for i in range(2, k + 1))


def build_gk(k: int) -> BipartiteAdversary:
    if k < 2:
        raise ValueError("k must be at least 2")
    blocks = {i: tuple(tuple(range(j * i, (j + 1) * i)) for j in range(k // i))
              for i in range(2, k + 1)}
    order = tuple((i, nb) for i in range(2, k + 1) for nb in blocks[i])
    return BipartiteAdversary(k, blocks, order)


def _a_point(a: int) -> Point:
    return Point(Fraction(a), Fraction(1))


def embed_segments(g: BipartiteAdversary) -> SegmentSetInstance:
    segs = tuple((_a_point(a), Point(Fraction(b), Fraction(0))) for a, b in g.edges)
    return SegmentSetInstance(segs, {"k": g.k, "edges": [list(e) for e in g.edges],
                                     "b_positions": [str(b) for b in range(g.n_b)]})


def _offsets() -> Iterator[Fraction]:
    """0, then reduced fractions of absolute value below 1/4 by denominator."""
    yield Fraction(0)
    den = 5
    while True:
        for num in range(1, den):
            if math.gcd(num, den) != 1 or 4 * num >= den:
                continue
            yield Fraction(num, den)
            yield Fraction(-num, den)
        den += 1


def embed_lines(g: BipartiteAdversary, return_positions: bool = False):
    """Extend every edge to a line so that crossings off the two carrier lines are simple.

    B vertices are placed one at a time at ``j + delta``.  Before placing a
    vertex, every non-vertex intersection ``q`` of the lines placed so far is
    projected from each top vertex onto ``y = 0``; those marks are avoided.
    Positions that would make a new line vertical or parallel to a placed
    line are avoided as well.
    """
    k = g.k
    # a line through (a, 1) and (b, 0) is x = b + (a - b) * y
    placed: list[tuple[int, Fraction]] = []
    slopes: set[Fraction] = set()
    # marks[a] holds reduced (numerator, denominator) pairs; ints hash faster than Fractions
    marks: list[set[tuple[int, int]]] = [set() for _ in range(k)]
    positions: list[Fraction] = []
    for j, (_, nb) in enumerate(g.b_vertices):
        chosen = None
        for delta in _offsets():
            b = j + delta
            key = (b.numerator, b.denominator)
            if any(b == a or key in marks[a] or (a - b) in slopes for a in nb):
                continue
            chosen = b
            break
        if chosen is None:  # pragma: no cover - the offset stream is infinite
            raise ConstructionError("no unmarked position")
        b = chosen
        positions.append(b)
        new_q: list[Point] = []
        for a in nb:
            d = a - b
            for a2, b2 in placed:
                d2 = a2 - b2
                if d == d2:
                    continue
                y = (b2 - b) / (d - d2)
                if y == 0 or y == 1:
                    continue
                new_q.append(Point(b + d * y, y))
        for a in nb:
            placed.append((a, b))
            slopes.add(a - b)
        for q in new_q:
            # projection of q from (a, 1) onto y = 0 is (qx - a*qy) / (1 - qy)
            xn, xd, yn, yd = q.x.numerator, q.x.denominator, q.y.numerator, q.y.denominator
            den = xd * (yd - yn)
            for a in range(k):
                num = xn * yd - a * yn * xd
                r = math.gcd(num, den)
                n_, d_ = num // r, den // r
                if d_ < 0:
                    n_, d_ = -n_, -d_
                marks[a].add((n_, d_))
    lines = tuple(line_through(_a_point(a), Point(b, Fraction(0))) for a, b in placed)
    inst = LineSetInstance(lines, {"k": k, "edges": [list(e) for e in g.edges],
                                   "b_positions": [str(p) for p in positions]})
    if return_positions:
        return inst, positions
    return inst


def find_triple_crossing(lines, vertices) -> Optional[Point]:
    """Exhaustive crossing check: return a violating intersection or ``None``.

    Every intersection of two lines that is not one of ``vertices`` must lie
    on exactly two lines.
    """
    lines = list(lines.lines) if isinstance(lines, LineSetInstance) else list(lines)
    from .cover import point_candidates_for_lines
    vset = set(vertices)
    pts, masks = point_candidates_for_lines(lines)
    for p, m in zip(pts, masks):
        if p not in vset and m.bit_count() > 2:
            return p
    return None


def _b_points(positions) -> list[Point]:
    return [Point(Fraction(b), Fraction(0)) for b in positions]


def _block_order_ok(g: BipartiteAdversary, chosen: list[Point], positions) -> bool:
    where = {p: g.b_vertices[j][0] for j, p in enumerate(_b_points(positions))}
    if any(p not in where for p in chosen):
        return False
    seq = [where[p] for p in chosen]
    return len(seq) == g.n_b and seq == sorted(seq, reverse=True)


def greedy_ratio_experiment(k_min: int, k_max: int, lines_k_max: Optional[int] = 20) -> list[dict]:
    """One record per k: greedy sizes on both embeddings against the A witness.

    The line embedding is only built for ``k <= lines_k_max`` (None means
    always); larger rows carry ``greedy_lines = None``.
    """
    if not 2 <= k_min <= k_max:
        raise ValueError("need 2 <= k_min <= k_max")
    rows = []
    for k in range(k_min, k_max + 1):
        g = build_gk(k)
        segs = embed_segments(g)
        sol = greedy_cover_segments_by_points(segs)
        a_pts = [_a_point(a) for a in range(k)]
        a_set = set(a_pts)
        witness_ok = all(s in a_set or t in a_set or any(on_segment(p, s, t) for p in a_pts)
                         for s, t in segs.segments)
        row = {
            "k": k,
            "b_count": g.n_b,
            "greedy_segments": sol.size,
            "block_order_ok": _block_order_ok(g, sol.chosen, range(g.n_b)),
            "greedy_lines": None,
            "simple_crossings_ok": None,
            "witness": k,
            "witness_ok": witness_ok,
            "ratio": Fraction(sol.size, k),
            "ln_bound": math.log(k + 1) - 2,
        }
        if lines_k_max is None or k <= lines_k_max:
            lines, positions = embed_lines(g, return_positions=True)
            verts = a_pts + _b_points(positions)
            row["simple_crossings_ok"] = find_triple_crossing(lines, verts) is None
            lsol = greedy_cover_lines_by_points(lines)
            row["greedy_lines"] = lsol.size
            row["witness_ok"] = witness_ok and all(
                any(l.contains(p) for p in a_pts) for l in lines.lines)
        rows.append(row)
    return rows


def ratio_meets_bound(ratio: Fraction, k: int) -> bool:
    """``ratio >= ln(k + 1) - 2`` decided exactly: ``e**(ratio + 2) >= k + 1``."""
    # e**x >= k+1 compared through high-precision exp; ratio is rational
    import mpmath
    with mpmath.workdps(50):
        return mpmath.exp(mpmath.mpf(ratio.numerator) / ratio.denominator + 2) >= k + 1


def _shear_for(lines: list[Line]) -> Fraction:
    # (x, y) -> (x + s*y, y) turns a*x + b*y = c into a*x + (b - a*s)*y = c
    bad = {Fraction(l.b, l.a) for l in lines if l.a != 0}
    s = 0
    while Fraction(s) in bad:
        s += 1
    return Fraction(s)


def dualize(lines) -> PointSetInstance:
    """Map each line ``y = m x + t`` to the point ``(m, -t)``.

    A shear is applied first when some line is vertical; it is recorded in
    the annotations.  Point-line incidence is preserved in both directions.
    """
    lines = list(lines.lines) if isinstance(lines, LineSetInstance) else list(lines)
    s = _shear_for(lines)
    pts = []
    for l in lines:
        b = l.b - l.a * s
        pts.append(Point(Fraction(-l.a, b), Fraction(-l.c, b)))
    return PointSetInstance(tuple(pts), {"shear": str(s)})


def dual_line(p: Point, shear: Fraction = Fraction(0)) -> Line:
    """Dual of a primal point, after applying the same shear."""
    x = p.x + shear * p.y
    return Line.from_coeffs(-x, 1, -p.y)
