"""Problem instances, solutions, tours, and their JSON file format.

File layout::

    {"kind": "points" | "segments" | "lines" | "sat" | "cubic-graph" | "tour",
     "data": {...},
     "annotations": {...}}          # optional

Rationals are written as strings ``"p/q"`` (``"p"`` when q = 1), reduced,
with a positive denominator.  Line coefficients are integer strings.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence, Union

import numpy as np

from .geometry import Line, Point, TurnMeasure, as_point, on_line, on_segment

__all__ = [
    "ValidationError",
    "PointSetInstance",
    "SegmentSetInstance",
    "LineSetInstance",
    "SatInstance",
    "CubicGraphInstance",
    "CoverSolution",
    "Tour",
    "Instance",
    "incidence",
    "format_rational",
    "parse_rational",
    "load_instance",
    "save_instance",
    "to_json",
    "from_json",
]


class ValidationError(ValueError):
    """Invalid input; ``reason`` is a stable machine-readable code."""

    def __init__(self, reason: str, message: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {message}" if message else reason)


_RAT = re.compile(r"^(-?\d+)(?:/(-?\d+))?$")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(s: Union[str, int]) -> Fraction:
    if isinstance(s, bool):
        raise ValidationError("rational-malformed", repr(s))
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValidationError("rational-malformed", repr(s))
    m = _RAT.match(s.strip())
    if not m:
        raise ValidationError("rational-malformed", repr(s))
    num = int(m.group(1))
    if m.group(2) is None:
        return Fraction(num)
    den = int(m.group(2))
    if den == 0:
        raise ValidationError("rational-zero-denominator", repr(s))
    if den < 0:
        raise ValidationError("rational-negative-denominator", repr(s))
    q = Fraction(num, den)
    if q.denominator != den:
        raise ValidationError("rational-unreduced", repr(s))
    return q


@dataclass(frozen=True)
class PointSetInstance:
    points: tuple[Point, ...]
    annotations: dict = field(default_factory=dict, compare=False)

    kind = "points"

    def __post_init__(self):
        pts = tuple(as_point(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(set(pts)) != len(pts):
            raise ValidationError("duplicate-points", "points must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class SegmentSetInstance:
    segments: tuple[tuple[Point, Point], ...]
    annotations: dict = field(default_factory=dict, compare=False)

    kind = "segments"

    def __post_init__(self):
        segs = tuple((as_point(s), as_point(t)) for s, t in self.segments)
        object.__setattr__(self, "segments", segs)
        for s, t in segs:
            if s == t:
                raise ValidationError("degenerate-segment", f"{s} == {t}")

    def __len__(self) -> int:
        return len(self.segments)


@dataclass(frozen=True)
class LineSetInstance:
    lines: tuple[Line, ...]
    annotations: dict = field(default_factory=dict, compare=False)

    kind = "lines"

    def __post_init__(self):
        lines = []
        for ln in self.lines:
            a, b, c = ln
            if a == 0 and b == 0:
                raise ValidationError("degenerate-line", repr(ln))
            lines.append(Line.from_coeffs(a, b, c))
        lines = tuple(lines)
        object.__setattr__(self, "lines", lines)
        if len(set(lines)) != len(lines):
            raise ValidationError("duplicate-lines", "lines must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.lines)


@dataclass(frozen=True)
class SatInstance:
    """E3-Occ-Max-E2-SAT: literals are signed 1-based variable indices."""

    n: int
    clauses: tuple[tuple[int, int], ...]
    annotations: dict = field(default_factory=dict, compare=False)

    kind = "sat"

    def __post_init__(self):
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        for c in clauses:
            if len(c) != 2:
                raise ValidationError("clause-arity", f"clause {c} must have 2 literals")
            for lit in c:
                if lit == 0 or abs(lit) > self.n:
                    raise ValidationError("variable-range", f"literal {lit}")
            if abs(c[0]) == abs(c[1]):
                raise ValidationError("clause-repeated-variable", f"clause {c}")
        occ = Counter(abs(l) for c in clauses for l in c)
        for v in range(1, self.n + 1):
            if occ[v] != 3:
                raise ValidationError("variable-occurrence",
                                      f"variable {v} occurs {occ[v]} times, expected 3")
            signs = {l > 0 for c in clauses for l in c if abs(l) == v}
            if len(signs) != 2:
                raise ValidationError("all-same-sign", f"variable {v}")
        if 3 * self.n != 2 * len(clauses):
            raise ValidationError("occurrence-count", "3n != 2m")

    @property
    def m(self) -> int:
        return len(self.clauses)

    def satisfied(self, assignment: Sequence[bool]) -> int:
        """Number of clauses satisfied; ``assignment[i]`` is variable i+1."""
        return sum(any((l > 0) == assignment[abs(l) - 1] for l in c) for c in self.clauses)

    def clause_satisfied(self, j: int, assignment: Sequence[bool]) -> bool:
        return any((l > 0) == assignment[abs(l) - 1] for l in self.clauses[j])


@dataclass(frozen=True)
class CubicGraphInstance:
    n: int
    edges: tuple[tuple[int, int], ...]
    marked_edge: tuple[int, int]
    annotations: dict = field(default_factory=dict, compare=False)

    kind = "cubic-graph"

    def __post_init__(self):
        edges = tuple(tuple(sorted((int(u), int(v)))) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "marked_edge", tuple(sorted(int(x) for x in self.marked_edge)))
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValidationError("vertex-range", f"edge {(u, v)}")
            if u == v:
                raise ValidationError("not-simple", f"self-loop at {u}")
        if len(set(edges)) != len(edges):
            raise ValidationError("not-simple", "repeated edge")
        deg = Counter(x for e in edges for x in e)
        for v in range(self.n):
            if deg[v] != 3:
                raise ValidationError("not-cubic", f"vertex {v} has degree {deg[v]}")
        if self.marked_edge not in edges:
            raise ValidationError("marked-edge-missing", f"{self.marked_edge}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return [sorted(a) for a in adj]


@dataclass
class CoverSolution:
    """Chosen lines (or points) and the indices of covered elements."""

    chosen: list
    covered: frozenset
    optimal: Optional[bool] = None
    info: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.chosen)

    def __len__(self) -> int:
        return len(self.chosen)


@dataclass(frozen=True)
class Tour:
    """Closed polygonal chain through ``vertices`` (the last joins the first)."""

    vertices: tuple[Point, ...]

    kind = "tour"

    def __post_init__(self):
        vs = tuple(as_point(v) for v in self.vertices)
        object.__setattr__(self, "vertices", vs)
        if len(vs) < 2:
            raise ValidationError("tour-too-short", "a tour needs at least 2 vertices")
        for i, v in enumerate(vs):
            if v == vs[(i + 1) % len(vs)]:
                raise ValidationError("tour-repeated-vertex", f"consecutive vertices equal at {i}")

    def __len__(self) -> int:
        return len(self.vertices)

    def turns(self) -> list[TurnMeasure]:
        vs = self.vertices
        n = len(vs)
        return [TurnMeasure.from_points(vs[i - 1], vs[i], vs[(i + 1) % n]) for i in range(n)]

    @property
    def links(self) -> int:
        """Maximal straight runs; forward-collinear vertices do not split a link."""
        return sum(not t.is_zero for t in self.turns())

    def segments(self) -> list[tuple[Point, Point]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def covers(self, points: Sequence) -> bool:
        segs = self.segments()
        return all(any(on_segment(as_point(p), s, t) for s, t in segs) for p in points)

    def reversed(self) -> "Tour":
        return Tour(tuple(reversed(self.vertices)))

    def rotated(self, k: int) -> "Tour":
        k %= len(self.vertices)
        return Tour(self.vertices[k:] + self.vertices[:k])


Instance = Union[PointSetInstance, SegmentSetInstance, LineSetInstance,
                 SatInstance, CubicGraphInstance, Tour]


def incidence(points, lines: Sequence[Line]) -> np.ndarray:
    """Boolean matrix, entry (i, j) true iff point i lies on line j."""
    pts = points.points if isinstance(points, PointSetInstance) else [as_point(p) for p in points]
    out = np.zeros((len(pts), len(lines)), dtype=bool)
    for j, ln in enumerate(lines):
        for i, p in enumerate(pts):
            out[i, j] = on_line(p, ln)
    return out


def _pt_json(p: Point) -> list[str]:
    return [format_rational(p.x), format_rational(p.y)]


def _pt_parse(obj) -> Point:
    if not isinstance(obj, (list, tuple)) or len(obj) != 2:
        raise ValidationError("point-malformed", repr(obj))
    return Point(parse_rational(obj[0]), parse_rational(obj[1]))


def _int_parse(s) -> int:
    q = parse_rational(s)
    if q.denominator != 1:
        raise ValidationError("integer-expected", repr(s))
    return int(q)


def to_json(inst: Instance) -> dict:
    if isinstance(inst, PointSetInstance):
        data: dict[str, Any] = {"points": [_pt_json(p) for p in inst.points]}
    elif isinstance(inst, SegmentSetInstance):
        data = {"segments": [[_pt_json(s), _pt_json(t)] for s, t in inst.segments]}
    elif isinstance(inst, LineSetInstance):
        data = {"lines": [[str(l.a), str(l.b), str(l.c)] for l in inst.lines]}
    elif isinstance(inst, SatInstance):
        data = {"n": inst.n, "clauses": [list(c) for c in inst.clauses]}
    elif isinstance(inst, CubicGraphInstance):
        data = {"n": inst.n, "edges": [list(e) for e in inst.edges],
                "marked_edge": list(inst.marked_edge)}
    elif isinstance(inst, Tour):
        data = {"vertices": [_pt_json(p) for p in inst.vertices]}
    else:
        raise TypeError(f"not an instance: {type(inst).__name__}")
    out = {"kind": inst.kind, "data": data}
    ann = getattr(inst, "annotations", None)
    if ann:
        out["annotations"] = ann
    return out


def from_json(obj: dict, kind: Optional[str] = None) -> Instance:
    if not isinstance(obj, dict) or "kind" not in obj or "data" not in obj:
        raise ValidationError("json-malformed", "expected an object with 'kind' and 'data'")
    k = obj["kind"]
    if kind is not None and k != kind:
        raise ValidationError("kind-mismatch", f"file has kind {k!r}, expected {kind!r}")
    data = obj["data"]
    ann = obj.get("annotations") or {}
    try:
        if k == "points":
            return PointSetInstance(tuple(_pt_parse(p) for p in data["points"]), ann)
        if k == "segments":
            return SegmentSetInstance(
                tuple((_pt_parse(s), _pt_parse(t)) for s, t in data["segments"]), ann)
        if k == "lines":
            return LineSetInstance(
                tuple(Line(*(_int_parse(x) for x in l)) for l in data["lines"]), ann)
        if k == "sat":
            return SatInstance(int(data["n"]), tuple(tuple(c) for c in data["clauses"]), ann)
        if k == "cubic-graph":
            return CubicGraphInstance(int(data["n"]), tuple(tuple(e) for e in data["edges"]),
                                      tuple(data["marked_edge"]), ann)
        if k == "tour":
            return Tour(tuple(_pt_parse(p) for p in data["vertices"]))
    except (KeyError, TypeError) as exc:
        raise ValidationError("json-malformed", str(exc)) from exc
    raise ValidationError("unknown-kind", repr(k))


def load_instance(path, kind: Optional[str] = None) -> Instance:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError("file-unreadable", str(exc)) from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError("json-malformed", str(exc)) from exc
    return from_json(obj, kind)


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(json.dumps(to_json(inst), indent=1, sort_keys=True) + "\n")
