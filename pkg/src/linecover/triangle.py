"""Three rotated, squashed copies of a point set near the corners of a triangle.

Covering the source set with k lines yields a covering tour of the copies
with 3k links; this module builds the copies, checks the geometric
preconditions exactly and builds that tour.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

import mpmath

from ._random import stream
from .adversary import _shear_for
from .cover import line_candidates, verify_point_cover
from .geometry import Line, Point, as_point, candidate_lines, intersect, line_through, on_line
from .instances import PointSetInstance, Tour

__all__ = [
    "TriangleInstance",
    "TriangleBuildError",
    "build_triangle_instance",
    "check_triangle_instance",
    "lines_to_covering_tour",
    "CLUSTERS",
]

CLUSTERS = ("a", "b", "c")
RADIUS = Fraction(1, 100)
SPREAD_DEGREES = 1


class TriangleBuildError(RuntimeError):
    pass


def _sin2_lower(degrees) -> Fraction:
    # rational just below sin^2(degrees), so passing the test is sound
    with mpmath.workdps(40):
        v = mpmath.sin(mpmath.radians(degrees)) ** 2
        q = Fraction(int(mpmath.floor(v * 10 ** 30)), 10 ** 30)
    return q


_SIN2_SPREAD = _sin2_lower(SPREAD_DEGREES)


def _rational_rotation(degrees: int, max_den: int) -> tuple[Fraction, Fraction]:
    with mpmath.workdps(30):
        u = mpmath.tan(mpmath.radians(degrees) / 2)
        u = Fraction(mpmath.nstr(u, 25)).limit_denominator(max_den)
    d = 1 + u * u
    return (1 - u * u) / d, 2 * u / d


def _sin2_between(d1: tuple[Fraction, Fraction], d2: tuple[Fraction, Fraction]) -> Fraction:
    cross = d1[0] * d2[1] - d1[1] * d2[0]
    return cross * cross / ((d1[0] ** 2 + d1[1] ** 2) * (d2[0] ** 2 + d2[1] ** 2))


@dataclass(frozen=True)
class TriangleInstance:
    source: tuple[Point, ...]
    local: tuple[Point, ...]          # squashed copy centred at the origin
    points: tuple[Point, ...]         # 3n points, clusters a, b, c in order
    labels: tuple[str, ...]
    inner: dict                       # cluster -> anchor vertex
    outer: dict                       # name -> outer triangle vertex
    edge_dirs: dict                   # cluster -> direction of its outer edge
    rotations: dict                   # cluster -> (cos, sin), rational
    shear: Fraction
    squash: Fraction
    center: tuple[Fraction, Fraction]
    scale: Fraction
    radius: Fraction = RADIUS
    spread_degrees: int = SPREAD_DEGREES
    seed: int = 0
    attempts: int = 1
    annotations: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return len(self.source)

    def cluster_points(self, name: str) -> list[Point]:
        return [p for p, l in zip(self.points, self.labels) if l == name]

    def place(self, name: str, p: Point) -> Point:
        c, s = self.rotations[name]
        o = self.inner[name]
        return Point(o.x + c * p.x - s * p.y, o.y + s * p.x + c * p.y)

    def to_local(self, p: Point) -> Point:
        x = (p.x + self.shear * p.y - self.center[0]) * self.scale
        y = (self.squash * p.y - self.center[1]) * self.scale
        return Point(x, y)

    def to_point_set(self) -> PointSetInstance:
        return PointSetInstance(self.points, {"clusters": "".join(self.labels)})


def _outer_triangle():
    with mpmath.workdps(30):
        h = Fraction(mpmath.nstr(mpmath.sqrt(3), 25)).limit_denominator(10 ** 6)
    a2, b2, c2 = Point(Fraction(0), Fraction(0)), Point(Fraction(2), Fraction(0)), Point(Fraction(1), h)

    def mid(p, q):
        return Point((p.x + q.x) / 2, (p.y + q.y) / 2)

    outer = {"a'": a2, "b'": b2, "c'": c2}
    inner = {"a": mid(b2, c2), "b": mid(c2, a2), "c": mid(a2, b2)}
    dirs = {"a": (c2.x - b2.x, c2.y - b2.y), "b": (c2.x - a2.x, c2.y - a2.y), "c": (Fraction(1), Fraction(0))}
    return outer, inner, dirs


def _local_copy(pts: list[Point]):
    lines = candidate_lines(pts)
    shear = _shear_for(lines)
    sheared = [(p.x + shear * p.y, p.y) for p in pts]
    slope = Fraction(0)
    for l in lines:
        b = l.b - l.a * shear
        slope = max(slope, abs(Fraction(l.a, b)))
    # squashed slopes stay below 1/120 rad, well inside the spread budget
    squash = Fraction(1, ceil(120 * slope)) if slope else Fraction(1)
    xs = [x for x, _ in sheared]
    ys = [squash * y for _, y in sheared]
    center = ((min(xs) + max(xs)) / 2, (min(ys) + max(ys)) / 2)
    ext = max(abs(x - center[0]) for x in xs) + max(abs(y - center[1]) for y in ys)
    scale = RADIUS / ext
    local = [Point((x - center[0]) * scale, (y - center[1]) * scale) for x, y in zip(xs, ys)]
    return local, shear, squash, center, scale


def check_triangle_instance(tri: TriangleInstance) -> list[str]:
    """Exact check of the three structural invariants; returns failures."""
    errs = []
    r2 = tri.radius ** 2
    for name in CLUSTERS:
        o = tri.inner[name]
        pts = tri.cluster_points(name)
        for p in pts:
            if (p.x - o.x) ** 2 + (p.y - o.y) ** 2 > r2:
                errs.append(f"cluster {name}: point {p} outside radius")
        edge = tri.edge_dirs[name]
        for l in candidate_lines(pts):
            if _sin2_between((l.b, -l.a), edge) > _SIN2_SPREAD:
                errs.append(f"cluster {name}: line {l} too steep against its edge")
    label = dict(zip(tri.points, tri.labels))
    lines, masks = line_candidates(list(tri.points))
    for l, m in zip(lines, masks):
        idx = [i for i in range(len(tri.points)) if m >> i & 1]
        if len({tri.labels[i] for i in idx}) > 1 and len(idx) != 2:
            errs.append(f"inter-cluster line {l} covers {len(idx)} points")
    if len(set(tri.points)) != len(tri.points) or len(label) != len(tri.points):
        errs.append("duplicate points")
    return errs


def build_triangle_instance(P, seed: int = 0, max_attempts: int = 50) -> TriangleInstance:
    pts = list(P.points) if isinstance(P, PointSetInstance) else [as_point(p) for p in P]
    if len(pts) < 2:
        raise ValueError("need at least 2 points")
    if len(set(pts)) != len(pts):
        raise ValueError("duplicate points")
    local, shear, squash, center, scale = _local_copy(pts)
    outer, inner, dirs = _outer_triangle()
    rng = stream(seed, "triangle")
    for attempt in range(1, max_attempts + 1):
        max_den = rng.randrange(10 ** 3, 10 ** 5)
        rots = {"a": _rational_rotation(120, max_den), "b": _rational_rotation(60, max_den),
                "c": (Fraction(1), Fraction(0))}
        tri = TriangleInstance(tuple(pts), tuple(local), (), (), inner, outer, dirs, rots,
                               shear, squash, center, scale, seed=seed, attempts=attempt)
        placed, labels = [], []
        for name in CLUSTERS:
            for p in local:
                placed.append(tri.place(name, p))
                labels.append(name)
        tri = TriangleInstance(tuple(pts), tuple(local), tuple(placed), tuple(labels), inner,
                               outer, dirs, rots, shear, squash, center, scale,
                               seed=seed, attempts=attempt)
        if not check_triangle_instance(tri):
            return tri
    raise TriangleBuildError(f"no valid placement after {max_attempts} attempts")


def _local_line(tri: TriangleInstance, line: Line) -> tuple[Point, Point]:
    hits = [i for i, p in enumerate(tri.source) if on_line(p, line)]
    if len(hits) >= 2:
        return tri.local[hits[0]], tri.local[hits[1]]
    p = tri.local[hits[0]] if hits else tri.local[0]
    return p, Point(p.x + 1, p.y)


def lines_to_covering_tour(L, tri: TriangleInstance) -> Tour:
    """Tour with 3|L| links covering all copies, one copy of each line per cluster.

    Lines are used round by round as a, b, c, a, b, c, ...; consecutive
    lines come from different clusters and meet near an outer vertex.
    """
    lines = list(L)
    if not lines:
        raise ValueError("empty line set")
    if not verify_point_cover(list(tri.source), lines):
        raise ValueError("lines do not cover the source points")
    seq: list[Line] = []
    for line in lines:
        p, q = _local_line(tri, line)
        for name in CLUSTERS:
            seq.append(line_through(tri.place(name, p), tri.place(name, q)))
    verts = []
    for j in range(len(seq)):
        v = intersect(seq[j - 1], seq[j])
        if v is None:
            raise TriangleBuildError("consecutive tour lines are parallel")
        verts.append(v)
    tour = Tour(tuple(verts))
    if tour.links != len(seq) or not tour.covers(list(tri.points)):
        raise TriangleBuildError("constructed tour failed validation")
    return tour
