"""Exact rational plane geometry.

Coordinates are :class:`fractions.Fraction`; lines are integer triples
``(a, b, c)`` meaning ``a*x + b*y = c``.  Angle comparisons go through an
exact signed squared cosine, never through floats.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd
from typing import Iterable, NamedTuple, Optional, Sequence

import mpmath

__all__ = [
    "Point",
    "Line",
    "TurnMeasure",
    "GeometryError",
    "as_point",
    "line_through",
    "collinear",
    "orientation",
    "candidate_lines",
    "intersect",
    "on_line",
    "on_segment",
    "turn",
    "min_nonzero_turn",
    "fresh_line_through",
]

_MP_DPS = 60


class GeometryError(ValueError):
    pass


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    def __repr__(self) -> str:
        return f"Point({self.x}, {self.y})"


def as_point(p) -> Point:
    """Coerce a pair of ints / Fractions / ``"p/q"`` strings to a Point."""
    if isinstance(p, Point):
        return p
    x, y = p
    return Point(Fraction(x), Fraction(y))


class Line(NamedTuple):
    a: int
    b: int
    c: int

    @classmethod
    def from_coeffs(cls, a, b, c) -> "Line":
        """Canonical line for ``a*x + b*y = c`` with rational coefficients."""
        a, b, c = Fraction(a), Fraction(b), Fraction(c)
        if a == 0 and b == 0:
            raise GeometryError("degenerate line")
        den = math.lcm(a.denominator, b.denominator, c.denominator)
        ia, ib, ic = int(a * den), int(b * den), int(c * den)
        g = gcd(gcd(ia, ib), ic)
        ia, ib, ic = ia // g, ib // g, ic // g
        if ia < 0 or (ia == 0 and ib < 0):
            ia, ib, ic = -ia, -ib, -ic
        return cls(ia, ib, ic)

    def contains(self, p: Point) -> bool:
        return self.a * p.x + self.b * p.y == self.c

    def __repr__(self) -> str:
        return f"Line({self.a}, {self.b}, {self.c})"


def line_through(p, q) -> Line:
    p, q = as_point(p), as_point(q)
    if p == q:
        raise GeometryError("degenerate line")
    a = q.y - p.y
    b = p.x - q.x
    return Line.from_coeffs(a, b, a * p.x + b * p.y)


def orientation(p: Point, q: Point, r: Point) -> Fraction:
    """Twice the signed area of triangle pqr."""
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def collinear(p, q, r) -> bool:
    return orientation(as_point(p), as_point(q), as_point(r)) == 0


def on_line(p: Point, line: Line) -> bool:
    return line.a * p.x + line.b * p.y == line.c


def on_segment(p: Point, s: Point, t: Point) -> bool:
    """Closed-segment membership, exact."""
    if orientation(s, t, p) != 0:
        return False
    return (min(s.x, t.x) <= p.x <= max(s.x, t.x)
            and min(s.y, t.y) <= p.y <= max(s.y, t.y))


def candidate_lines(points: Sequence) -> list[Line]:
    """All lines spanned by at least two of the points, deduplicated.

    The result is sorted by the canonical ``(a, b, c)`` triple.
    """
    pts = [as_point(p) for p in points]
    if len(pts) < 2:
        return []
    seen = {line_through(p, q) for p, q in combinations(pts, 2)}
    return sorted(seen)


def intersect(l1: Line, l2: Line) -> Optional[Point]:
    det = l1.a * l2.b - l2.a * l1.b
    if det == 0:
        return None
    x = Fraction(l1.c * l2.b - l2.c * l1.b, det)
    y = Fraction(l1.a * l2.c - l2.a * l1.c, det)
    return Point(x, y)


def fresh_line_through(p, avoid: Iterable) -> Line:
    """A line through ``p`` containing none of the points in ``avoid``.

    Directions ``(1, s)`` for s = 0, 1, -1, 2, ... are tried, then vertical.
    """
    p = as_point(p)
    others = [as_point(q) for q in avoid if as_point(q) != p]
    s = 0
    while True:
        for slope in ((s,) if s == 0 else (s, -s)):
            line = Line.from_coeffs(-slope, 1, p.y - slope * p.x)
            if not any(on_line(q, line) for q in others):
                return line
        s += 1
        if s > len(others) + 1:
            break
    # at most len(others) slopes are blocked, so the loop above always returns
    raise GeometryError("no free direction")  # pragma: no cover


def _mpq(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


FORWARD = "forward-collinear"
REVERSE = "reverse-collinear"
PROPER = "proper"


class TurnMeasure:
    """Turning angle ``pi - angle(p1 p2 p3)`` with an exact total order.

    The order key is the signed squared cosine of the interior angle,
    negated: it increases strictly with the turning angle.  ``radians`` is
    for display only.
    """

    __slots__ = ("key", "kind", "_dot", "_cross", "_n1", "_n2")

    def __init__(self, dot: Fraction, cross: Fraction, n1: Fraction, n2: Fraction):
        self._dot = Fraction(dot)
        self._cross = abs(Fraction(cross))
        self._n1 = Fraction(n1)
        self._n2 = Fraction(n2)
        # cos(interior) = dot / sqrt(n1 n2); turn grows as cos(interior) grows
        sq = self._dot * self._dot / (self._n1 * self._n2)
        self.key = sq if self._dot > 0 else -sq
        if self._cross == 0:
            self.kind = REVERSE if self._dot > 0 else FORWARD
        else:
            self.kind = PROPER

    @classmethod
    def from_points(cls, p1: Point, p2: Point, p3: Point) -> "TurnMeasure":
        ux, uy = p1.x - p2.x, p1.y - p2.y
        vx, vy = p3.x - p2.x, p3.y - p2.y
        return cls(ux * vx + uy * vy, ux * vy - uy * vx,
                   ux * ux + uy * uy, vx * vx + vy * vy)

    @classmethod
    def zero(cls) -> "TurnMeasure":
        return cls(-1, 0, 1, 1)

    @classmethod
    def straight_back(cls) -> "TurnMeasure":
        return cls(1, 0, 1, 1)

    @classmethod
    def right(cls) -> "TurnMeasure":
        return cls(0, 1, 1, 1)

    @property
    def is_zero(self) -> bool:
        return self.kind == FORWARD

    @property
    def is_pi(self) -> bool:
        return self.kind == REVERSE

    @property
    def radians(self) -> float:
        return math.atan2(float(self._cross), float(-self._dot))

    def mp_radians(self, dps: int = _MP_DPS):
        """High-precision value as an ``mpmath.mpf``."""
        with mpmath.workdps(dps):
            if self.kind == FORWARD:
                return mpmath.mpf(0)
            if self.kind == REVERSE:
                return +mpmath.pi
            dot = _mpq(self._dot)
            cos_int = dot / mpmath.sqrt(_mpq(self._n1) * _mpq(self._n2))
            return mpmath.pi - mpmath.acos(cos_int)

    def cmp_radians(self, phi) -> int:
        """Sign of ``self - phi`` for a real ``phi``.

        ``phi`` may be a rational, an ``mpf`` or a zero-argument callable; a
        callable is evaluated at the working precision, which is the safe way
        to pass irrational thresholds such as ``lambda: mpmath.pi / 2``.
        Raises if the two values cannot be separated.
        """
        with mpmath.workdps(_MP_DPS):
            if callable(phi):
                phi = phi()
            elif isinstance(phi, (Fraction, int)):
                phi = _mpq(Fraction(phi))
            diff = self.mp_radians() - mpmath.mpf(phi)
            if abs(diff) < mpmath.mpf(10) ** (-(_MP_DPS - 10)):
                if self.kind == FORWARD and phi == 0:
                    return 0
                raise GeometryError("angle comparison undecidable at working precision")
            return 1 if diff > 0 else -1

    def at_most_right_angle(self) -> bool:
        return self._dot <= 0

    def _cmp(self, other: "TurnMeasure") -> int:
        return (self.key > other.key) - (self.key < other.key)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TurnMeasure):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __lt__(self, other: "TurnMeasure") -> bool:
        return self.key < other.key

    def __le__(self, other: "TurnMeasure") -> bool:
        return self.key <= other.key

    def __gt__(self, other: "TurnMeasure") -> bool:
        return self.key > other.key

    def __ge__(self, other: "TurnMeasure") -> bool:
        return self.key >= other.key

    def __float__(self) -> float:
        return self.radians

    def __repr__(self) -> str:
        return f"TurnMeasure({self.radians:.12g} rad, {self.kind})"


def turn(p1, p2, p3) -> TurnMeasure:
    p1, p2, p3 = as_point(p1), as_point(p2), as_point(p3)
    if p1 == p2 or p2 == p3:
        raise GeometryError("coincident consecutive points")
    return TurnMeasure.from_points(p1, p2, p3)


def min_nonzero_turn(points: Sequence) -> TurnMeasure:
    """Smallest turning angle over ordered non-collinear triples."""
    pts = [as_point(p) for p in points]
    best = None
    for p1, p2, p3 in permutations(pts, 3):
        if orientation(p1, p2, p3) == 0:
            continue
        t = TurnMeasure.from_points(p1, p2, p3)
        if best is None or t < best:
            best = t
    if best is None:
        raise GeometryError("alpha_P undefined: all points collinear")
    return best
