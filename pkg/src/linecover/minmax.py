"""Smooth x-monotone curve around a point set, for min-max-turn tours.

The curve is a half-circle on top joined to a polygonal chain below it.
The chain holds two pieces of every line spanned by the points (one far to
the right, one far to the left), vertical connectors and one horizontal
bottom piece; every corner is rounded by a circular arc.  Points sampled on
the arcs and near the ends of the pieces, together with the input points,
form the tour instance.

All coordinates live on one integer grid (``Q = ints / unit``) so every
check below is exact.  Arc samples are rounded to the grid; samples on
straight pieces are snapped to grid points lying exactly on the piece.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm

import mpmath

from .geometry import Line, Point, TurnMeasure, as_point, candidate_lines, intersect, min_nonzero_turn, on_line
from .instances import PointSetInstance, Tour

__all__ = [
    "CurveInstance",
    "CurveBuildError",
    "DEFAULT_DELTA",
    "DEFAULT_MU",
    "DEFAULT_T_CAP",
    "chain_piece_count",
    "required_t",
    "build_minmax_instance",
    "check_curve_instance",
    "minmax_tour_order",
    "order_max_turn",
    "lines_to_minmax_tour",
    "turn_budget",
]

DEFAULT_DELTA = Fraction(1, 100)
DEFAULT_MU = 1
DEFAULT_T_CAP = 10 ** 5
_DPS = 50
_GRID = 10 ** 15


class CurveBuildError(RuntimeError):
    pass


def chain_piece_count(n_lines: int) -> int:
    return 2 * n_lines + 2 * (n_lines + 1) + 1


def required_t(n: int, alpha_p: TurnMeasure, mu: int) -> int:
    with mpmath.workdps(_DPS):
        alpha = alpha_p.mp_radians(_DPS) / mpmath.mpf(n) ** mu
        return int(mpmath.ceil(9 * n * n * mpmath.pi / alpha))


def _sin2_lower(angle) -> Fraction:
    with mpmath.workdps(_DPS):
        v = mpmath.sin(angle) ** 2
        return Fraction(int(mpmath.floor(v * 10 ** 45)), 10 ** 45)


def _rotation_avoiding_vertical(lines: list[Line]) -> tuple[Fraction, Fraction]:
    # rational rotations from u = 0, 1/2, 1/3, 2/3, 1/4, ...; line direction
    # (b, -a) turns vertical iff c*b + s*a == 0
    cands = [Fraction(0)] + [Fraction(p, q) for q in range(2, 50) for p in range(1, q) if gcd(p, q) == 1]
    for u in cands:
        d = 1 + u * u
        c, s = (1 - u * u) / d, 2 * u / d
        if all(c * l.b + s * l.a != 0 for l in lines):
            return c, s
    raise CurveBuildError("no rotation keeps every line non-vertical")


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


class _Support:
    """Straight carrier of a chain piece, with grid snapping onto it."""

    def __init__(self, kind: str, value):
        self.kind = kind          # "v": x = value, "h": y = value, "l": Line
        self.value = value
        if kind == "l":
            a, b, c = value
            g, x0, y0 = _ext_gcd(a, b)
            if c % g:
                raise CurveBuildError("line carries no grid points")
            self.base = (x0 * (c // g), y0 * (c // g))
            self.step = (b // g, -a // g)

    def snap(self, x, y) -> tuple[int, int]:
        if self.kind == "v":
            return self.value, int(mpmath.nint(y))
        if self.kind == "h":
            return int(mpmath.nint(x)), self.value
        bx, by = self.base
        sx, sy = self.step
        j = int(mpmath.nint(((x - bx) * sx + (y - by) * sy) / (sx * sx + sy * sy)))
        return bx + j * sx, by + j * sy

    def y_at(self, x) -> Fraction:
        a, b, c = self.value
        return Fraction(c - a * x, b)


@dataclass
class CurveInstance:
    source: tuple[Point, ...]
    rotation: tuple[Fraction, Fraction]
    unit: int
    lines: tuple[Line, ...]               # spanned lines, grid frame
    alpha_p: TurnMeasure
    mu: int
    t: int
    t_required: int
    scaled: bool
    delta: Fraction
    pieces: list[dict]                    # chain pieces in curve order, from b to a
    arcs: list[dict]                      # arcs; arcs[0] is the half-circle
    grid: list[tuple[int, int]]           # Q on the grid: P first, then the curve
    tags: list[tuple]
    line_pieces: dict                     # line -> (right piece, left piece)
    annotations: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.source)

    @property
    def s(self) -> int:
        return len(self.pieces)

    @property
    def curve_start(self) -> int:
        return self.n

    @property
    def m(self) -> int:
        return len(self.grid) - self.n

    @property
    def theta(self):
        with mpmath.workdps(_DPS):
            return mpmath.pi / self.t

    @property
    def alpha(self):
        with mpmath.workdps(_DPS):
            return self.alpha_p.mp_radians(_DPS) / mpmath.mpf(self.n) ** self.mu

    @cached_property
    def points(self) -> tuple[Point, ...]:
        u = self.unit
        return tuple(Point(Fraction(x, u), Fraction(y, u)) for x, y in self.grid)

    def to_point_set(self) -> PointSetInstance:
        return PointSetInstance(self.points, {
            "s": str(self.s), "t": str(self.t), "scaled": str(self.scaled).lower(),
            "source_points": str(self.n)})

    def summary(self) -> dict:
        return {
            "n": self.n, "lines": len(self.lines), "s": self.s, "t": self.t,
            "t_required": self.t_required, "scaled": self.scaled, "mu": self.mu,
            "delta": str(self.delta), "points": len(self.grid),
            "alpha_p": mpmath.nstr(self.alpha_p.mp_radians(), 15),
            "theta": mpmath.nstr(self.theta, 15),
        }


def _to_grid(pts: list[Point], rot) -> tuple[list[tuple[int, int]], int]:
    c, s = rot
    rotated = [(c * p.x - s * p.y, s * p.x + c * p.y) for p in pts]
    den = lcm(*(q.denominator for xy in rotated for q in xy))
    xs = [x * den for x, _ in rotated]
    ys = [y * den for _, y in rotated]
    ext = max(max(xs) - min(xs), max(ys) - min(ys), 1)
    k = -(-_GRID // int(ext))
    return [(int(x * k), int(y * k)) for x, y in zip(xs, ys)], den * k


def _mp(q) -> mpmath.mpf:
    q = Fraction(q)
    return mpmath.mpf(q.numerator) / q.denominator


def _layout(grid_p: list[tuple[int, int]], lines: list[Line]):
    """Chain pieces (support, start, end) from b down the right, across, up the left to a."""
    xs = [Fraction(x) for x, _ in grid_p]
    ys = [Fraction(y) for _, y in grid_p]
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            p = intersect(lines[i], lines[j])
            if p is not None:
                xs.append(p.x)
                ys.append(p.y)
    xmin, xmax, ymin, ymax = min(xs), max(xs), min(ys), max(ys)
    M = int(max(xmax - xmin, ymax - ymin)) + 1
    sup = [_Support("l", l) for l in lines]
    L = len(lines)
    x_right = [int(xmax) + 1 + M * (j + 1) for j in range(L + 1)]     # x_right[0] at d
    x_left = [int(xmin) - 1 - M * (j + 1) for j in range(L + 1)]      # x_left[0] at c
    far_r, far_l = x_right[-1], x_left[-1]
    # bottom-to-top order far to the right and far to the left
    right = sorted(range(L), key=lambda i: sup[i].y_at(far_r))
    left = sorted(range(L), key=lambda i: sup[i].y_at(far_l))
    vals = [sup[i].y_at(x) for i in range(L) for x in (far_r, far_l, x_right[0], x_left[0])]
    y_top = int(max(vals + [ymax])) + 1 + M
    y_bot = int(min(vals + [ymin])) - 1 - M

    pieces = []

    def add(kind, support, start, end, side, line=None):
        pieces.append({"kind": kind, "support": support, "start": start, "end": end,
                       "side": side, "line": line})

    y = Fraction(y_top)
    for j in range(L, 0, -1):
        i = right[j - 1]
        X = x_right[j]
        y2 = sup[i].y_at(X)
        add("vertical", _Support("v", X), (Fraction(X), y), (Fraction(X), y2), "right")
        X2 = x_right[j - 1]
        add("line", sup[i], (Fraction(X), y2), (Fraction(X2), sup[i].y_at(X2)), "right", i)
        y = sup[i].y_at(X2)
    X = x_right[0]
    add("vertical", _Support("v", X), (Fraction(X), y), (Fraction(X), Fraction(y_bot)), "right")
    add("horizontal", _Support("h", y_bot), (Fraction(X), Fraction(y_bot)),
        (Fraction(x_left[0]), Fraction(y_bot)), "bottom")
    y = Fraction(y_bot)
    for j in range(1, L + 1):
        i = left[j - 1]
        X = x_left[j - 1]
        y2 = sup[i].y_at(X)
        add("vertical", _Support("v", X), (Fraction(X), y), (Fraction(X), y2), "left")
        X2 = x_left[j]
        add("line", sup[i], (Fraction(X), y2), (Fraction(X2), sup[i].y_at(X2)), "left", i)
        y = sup[i].y_at(X2)
    X = x_left[L]
    add("vertical", _Support("v", X), (Fraction(X), y), (Fraction(X), Fraction(y_top)), "left")
    a = (x_left[L], y_top)
    b = (x_right[L], y_top)
    return pieces, a, b


def build_minmax_instance(P, mu: int = DEFAULT_MU, t_cap: int = DEFAULT_T_CAP,
                          delta: Fraction = DEFAULT_DELTA) -> CurveInstance:
    if mu < 1:
        raise ValueError("mu must be at least 1")
    pts = list(P.points) if isinstance(P, PointSetInstance) else [as_point(p) for p in P]
    if len(set(pts)) != len(pts):
        raise ValueError("duplicate points")
    n = len(pts)
    alpha_p = min_nonzero_turn(pts)        # raises on collinear input
    rot = _rotation_avoiding_vertical(candidate_lines(pts))
    grid_p, unit = _to_grid(pts, rot)
    lines = candidate_lines([Point(Fraction(x), Fraction(y)) for x, y in grid_p])
    t_req = required_t(n, alpha_p, mu)
    t = min(t_req, t_cap)
    pieces, a, b = _layout(grid_p, lines)
    s = len(pieces)
    if s != chain_piece_count(len(lines)):
        raise CurveBuildError("piece count mismatch")

    with mpmath.workdps(_DPS):
        theta = mpmath.pi / t
        sin_theta = mpmath.sin(theta)
        # corner arcs: tangent length a quarter of the shorter neighbour
        lens, dirs = [], []
        for pc in pieces:
            dx = _mp(pc["end"][0] - pc["start"][0])
            dy = _mp(pc["end"][1] - pc["start"][1])
            ln = mpmath.sqrt(dx * dx + dy * dy)
            lens.append(ln)
            dirs.append((dx / ln, dy / ln))
        arcs = []
        # half-circle from a over the top to b
        cx = (_mp(a[0]) + _mp(b[0])) / 2
        R = (_mp(b[0]) - _mp(a[0])) / 2
        half = [a]
        for j in range(1, t):
            ang = mpmath.pi - mpmath.pi * j / t
            half.append((int(mpmath.nint(cx + R * mpmath.cos(ang))),
                         int(mpmath.nint(a[1] + R * mpmath.sin(ang)))))
        half.append(b)
        arcs.append({"kind": "half-circle", "samples": half, "radius": R, "sweep": +mpmath.pi,
                     "before": len(pieces) - 1, "after": 0})
        for k in range(s - 1):
            u, v = dirs[k], dirs[k + 1]
            V = (_mp(pieces[k]["end"][0]), _mp(pieces[k]["end"][1]))
            cross = u[0] * v[1] - u[1] * v[0]
            dot = u[0] * v[0] + u[1] * v[1]
            phi = mpmath.atan2(abs(cross), dot)
            d = min(lens[k], lens[k + 1]) / 4
            rho = d / mpmath.tan(phi / 2)
            T1 = (V[0] - d * u[0], V[1] - d * u[1])
            nrm = (-u[1], u[0]) if cross > 0 else (u[1], -u[0])
            C = (T1[0] + rho * nrm[0], T1[1] + rho * nrm[1])
            step = phi / t if cross > 0 else -phi / t
            cs, sn = mpmath.cos(step), mpmath.sin(step)
            rx, ry = T1[0] - C[0], T1[1] - C[1]
            samples = [pieces[k]["support"].snap(*T1)]
            for _ in range(1, t):
                rx, ry = rx * cs - ry * sn, rx * sn + ry * cs
                samples.append((int(mpmath.nint(C[0] + rx)), int(mpmath.nint(C[1] + ry))))
            T2 = (V[0] + d * v[0], V[1] + d * v[1])
            samples.append(pieces[k + 1]["support"].snap(*T2))
            arcs.append({"kind": "corner", "samples": samples, "radius": rho, "sweep": phi,
                         "before": k, "after": k + 1})
        chord = [2 * arc["radius"] * mpmath.sin(arc["sweep"] / (2 * t)) for arc in arcs]
        # arc touching the start / end of every piece
        start_arc = {arc["after"]: i for i, arc in enumerate(arcs)}
        end_arc = {arc["before"]: i for i, arc in enumerate(arcs)}
        piece_samples = []
        for k, pc in enumerate(pieces):
            ux, uy = dirs[k]
            p0 = arcs[start_arc[k]]["samples"][-1]
            p1 = arcs[end_arc[k]]["samples"][0]
            e0 = chord[start_arc[k]] * sin_theta / 4
            e1 = chord[end_arc[k]] * sin_theta / 4
            head = [pc["support"].snap(p0[0] + ux * e0 * i / n, p0[1] + uy * e0 * i / n)
                    for i in range(1, n + 1)]
            tail = [pc["support"].snap(p1[0] - ux * e1 * i / n, p1[1] - uy * e1 * i / n)
                    for i in range(n, 0, -1)]
            piece_samples.append((head, tail))

    grid = list(grid_p)
    tags: list[tuple] = [("P", i) for i in range(n)]

    def push(pt, tag):
        grid.append(pt)
        tags.append(tag)

    for j, pt in enumerate(arcs[0]["samples"]):
        push(pt, ("arc", 0, j))
    for k in range(s):
        head, tail = piece_samples[k]
        pieces[k]["head"] = len(grid)
        for i, pt in enumerate(head):
            push(pt, ("piece", k, "head", i))
        for i, pt in enumerate(tail):
            push(pt, ("piece", k, "tail", i))
        pieces[k]["tail_end"] = len(grid)
        if k < s - 1:
            for j, pt in enumerate(arcs[k + 1]["samples"]):
                push(pt, ("arc", k + 1, j))
    line_pieces = {}
    for k, pc in enumerate(pieces):
        if pc["line"] is not None:
            r, l = line_pieces.get(pc["line"], (None, None))
            line_pieces[pc["line"]] = (k, l) if pc["side"] == "right" else (r, k)
    for arc in arcs:
        arc["radius"] = mpmath.nstr(arc["radius"], 20)
        arc["sweep"] = mpmath.nstr(arc["sweep"], 20)
    for pc in pieces:
        pc["support"] = (pc["support"].kind, pc["support"].value)
    return CurveInstance(tuple(pts), rot, unit, tuple(lines), alpha_p, mu, t, t_req,
                         t_req > t_cap, Fraction(delta), pieces, arcs, grid, tags, line_pieces)


def _angle_at_most(o, p, q, num: int, den: int) -> bool:
    # angle p-o-q at most beta, given sin^2(beta) >= num/den and beta < pi/2
    ux, uy = p[0] - o[0], p[1] - o[1]
    vx, vy = q[0] - o[0], q[1] - o[1]
    if ux * vx + uy * vy <= 0:
        return False
    cr = ux * vy - uy * vx
    return cr * cr * den <= num * (ux * ux + uy * uy) * (vx * vx + vy * vy)


def check_curve_instance(c: CurveInstance) -> list[str]:
    """Exact structural checks; returns the list of failures."""
    errs = []
    L = len(c.lines)
    if c.s != chain_piece_count(L) or len(c.arcs) != c.s:
        errs.append(f"piece/arc count {c.s}/{len(c.arcs)} != {chain_piece_count(L)}")
    if len(c.grid) != c.n + c.s * (c.t + 1 + 2 * c.n):
        errs.append(f"point count {len(c.grid)} != n + s(t+1+2n)")
    if len(set(c.grid)) != len(c.grid):
        errs.append("duplicate sample points")
    curve = c.grid[c.n:]
    top = curve[:c.t + 1]
    if any(top[i][0] >= top[i + 1][0] for i in range(c.t)):
        errs.append("half-circle not strictly increasing in x")
    low = curve[c.t:] + curve[:1]
    if any(low[i][0] < low[i + 1][0] for i in range(len(low) - 1)):
        errs.append("lower chain not monotone in x")
    if any(not (top[0][0] <= x <= top[-1][0]) for x, _ in c.grid):
        errs.append("points outside the x-range of the curve")
    # theta-property, within the factor 1 + delta
    with mpmath.workdps(_DPS):
        bound = _sin2_lower(c.theta * _mp(1 + c.delta))
    num, den = bound.numerator, bound.denominator
    for ai, arc in enumerate(c.arcs):
        samp = arc["samples"]
        ends = [(samp[0], arc["before"], "tail", samp[1:]), (samp[-1], arc["after"], "head", samp[:-1])]
        for p, k, which, others in ends:
            pc = c.pieces[k]
            lo = pc["head"] if which == "head" else pc["head"] + c.n
            qs = c.grid[lo:lo + c.n]
            for o in others:
                for q in qs:
                    if not _angle_at_most(o, p, q, num, den):
                        errs.append(f"theta-property fails on arc {ai}")
                        break
                else:
                    continue
                break
    return errs


def _grid_line(c: CurveInstance, line: Line) -> int:
    hits = [i for i, p in enumerate(c.source) if on_line(p, line)]
    if len(hits) < 2:
        raise ValueError(f"line {line} is not spanned by two input points")
    p, q = (Point(Fraction(x), Fraction(y)) for x, y in (c.grid[hits[0]], c.grid[hits[1]]))
    for i, l in enumerate(c.lines):
        if on_line(p, l) and on_line(q, l):
            return i
    raise ValueError(f"line {line} not found among spanned lines")


def minmax_tour_order(L, c: CurveInstance) -> list[int]:
    """Visiting order (indices into ``c.grid``) of the round-based tour.

    Curve points get colours ``i mod (k+1)`` by their 1-based position.
    Round r (1..k) walks the curve with colour r from the half-circle down
    the right side to the right piece of line r, follows that line leftwards
    through its not yet visited input points, and resumes on the line's left
    piece up to the half-circle.  The last round picks up colour 0 and
    everything skipped.
    """
    lines = list(L)
    k = len(lines)
    if k == 0 or k > c.n:
        raise ValueError("need 1 <= |L| <= n")
    from .cover import verify_point_cover
    if not verify_point_cover(list(c.source), lines):
        raise ValueError("lines do not cover the input points")
    idx = [_grid_line(c, l) for l in lines]
    if len(set(idx)) != k:
        raise ValueError("repeated line")
    # rounds in the order the right side meets the lines
    idx.sort(key=lambda i: c.line_pieces[i][0])
    n, m = c.n, c.m
    colour = [(j + 1) % (k + 1) for j in range(m)]
    visited = [False] * m
    p_done = [False] * n
    order: list[int] = []
    for r, li in enumerate(idx, start=1):
        rk, lk = c.line_pieces[li]
        rlo, rhi = c.pieces[rk]["head"] - n, c.pieces[rk]["tail_end"] - n
        llo, lhi = c.pieces[lk]["head"] - n, c.pieces[lk]["tail_end"] - n
        exits = [j for j in range(rlo, rhi) if colour[j] == r]
        entries = [j for j in range(llo, lhi) if colour[j] == r]
        if not exits or not entries:
            raise CurveBuildError(f"no colour-{r} sample on a piece of line {r}")
        ex, en = exits[-1], entries[0]
        for j in range(0, ex + 1):
            if colour[j] == r:
                order.append(n + j)
                visited[j] = True
        line = c.lines[li]
        on = [i for i in range(n) if not p_done[i]
              and on_line(Point(Fraction(c.grid[i][0]), Fraction(c.grid[i][1])), line)]
        for i in sorted(on, key=lambda i: -c.grid[i][0]):
            order.append(i)
            p_done[i] = True
        for j in range(en, m):
            if colour[j] == r:
                order.append(n + j)
                visited[j] = True
    if not all(p_done):
        raise CurveBuildError("some input point was not visited")
    order.extend(n + j for j in range(m) if not visited[j])
    return order


def order_max_turn(c: CurveInstance, order: list[int]) -> tuple[TurnMeasure, int]:
    """Largest turn along the closed order, and the position where it occurs."""
    g = c.grid
    N = len(order)
    best_f, cands = None, []
    fl = []
    for pos in range(N):
        p1, p2, p3 = g[order[pos - 1]], g[order[pos]], g[order[(pos + 1) % N]]
        ux, uy = p1[0] - p2[0], p1[1] - p2[1]
        vx, vy = p3[0] - p2[0], p3[1] - p2[1]
        dot = ux * vx + uy * vy
        key = (dot * dot) / ((ux * ux + uy * uy) * (vx * vx + vy * vy))
        fl.append(key if dot > 0 else -key)
    best_f = max(fl)
    cands = [pos for pos, v in enumerate(fl) if v >= best_f - 1e-9]
    best, where = None, -1
    for pos in cands:
        p1, p2, p3 = (Point(Fraction(x), Fraction(y)) for x, y in
                      (g[order[pos - 1]], g[order[pos]], g[order[(pos + 1) % N]]))
        tm = TurnMeasure.from_points(p1, p2, p3)
        if best is None or tm > best:
            best, where = tm, pos
    return best, where


def turn_budget(c: CurveInstance, k: int):
    with mpmath.workdps(_DPS):
        return _mp(1 + c.delta) * (k + 2) * c.theta


def lines_to_minmax_tour(L, c: CurveInstance, verify: bool = True) -> Tour:
    """Hamiltonian tour of Q with every turn at most (1+delta)(k+2)theta."""
    order = minmax_tour_order(L, c)
    if verify:
        if sorted(order) != list(range(len(c.grid))):
            raise CurveBuildError("order is not Hamiltonian")
        worst, _ = order_max_turn(c, order)
        if worst.cmp_radians(turn_budget(c, len(list(L)))) > 0:
            raise CurveBuildError(f"max turn {worst} exceeds the budget")
    pts = c.points
    return Tour(tuple(pts[i] for i in order))
