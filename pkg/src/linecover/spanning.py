"""Cubic graph with a marked edge -> point set for min-link spanning tours.

The marked edge {s, t} is replaced by two pendant dummies s', t'.  Every
vertex gets a point on the unit circle and every edge a point strictly
inside the chord of its endpoints; a Hamiltonian s'-t' path then turns into
a spanning tour with m + 2 links.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from ._random import stream
from .cover import line_candidates
from .geometry import Point
from .instances import CubicGraphInstance, PointSetInstance, Tour, ValidationError

__all__ = [
    "GRAPH_GUARD",
    "GuardExceeded",
    "SpanningInstance",
    "SpanningBuildError",
    "derived_graph",
    "build_spanning_instance",
    "find_ham_path",
    "find_ham_circuit_with_edge",
    "hampath_to_spanning_tour",
    "standard_graphs",
]

GRAPH_GUARD = 16


class GuardExceeded(ValueError):
    pass


class SpanningBuildError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpanningInstance:
    graph: CubicGraphInstance
    n_vertices: int                   # n + 2
    edges: tuple[tuple[int, int], ...]  # edges of the derived graph
    s_dummy: int
    t_dummy: int
    points: tuple[Point, ...]         # vertex points, then edge points
    seed: int = 0
    attempts: int = 1
    annotations: dict = field(default_factory=dict, compare=False)

    def vertex_point(self, v: int) -> Point:
        return self.points[v]

    def edge_point(self, j: int) -> Point:
        return self.points[self.n_vertices + j]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return [sorted(a) for a in adj]

    def to_point_set(self) -> PointSetInstance:
        return PointSetInstance(self.points, {
            "vertex_points": str(self.n_vertices),
            "edges": " ".join(f"{u}-{v}" for u, v in self.edges),
            "dummies": f"{self.s_dummy} {self.t_dummy}",
        })


def derived_graph(G: CubicGraphInstance) -> tuple[int, tuple[tuple[int, int], ...], int, int]:
    s, t = G.marked_edge
    sd, td = G.n, G.n + 1
    edges = tuple(e for e in G.edges if e != G.marked_edge) + ((s, sd), (t, td))
    return G.n + 2, edges, sd, td


def _circle_point(u: Fraction) -> Point:
    d = 1 + u * u
    return Point((1 - u * u) / d, 2 * u / d)


def _placement_ok(points: list[Point], n_vertices: int, edges) -> bool:
    if len(set(points)) != len(points):
        return False
    allowed = {(1 << u) | (1 << v) | (1 << (n_vertices + j)) for j, (u, v) in enumerate(edges)}
    _, masks = line_candidates(points)
    return all(m.bit_count() <= 2 or m in allowed for m in masks)


def build_spanning_instance(G: CubicGraphInstance, seed: int = 0,
                            max_attempts: int = 100) -> SpanningInstance:
    if not isinstance(G, CubicGraphInstance):
        raise ValidationError("not-cubic", "expected a cubic graph instance")
    nv, edges, sd, td = derived_graph(G)
    rng = stream(seed, "spanning")
    for attempt in range(1, max_attempts + 1):
        den = rng.randrange(50, 500)
        us = []
        with mpmath.workdps(30):
            for i in range(nv):
                ang = -mpmath.pi + 2 * mpmath.pi * (i + mpmath.mpf(rng.randrange(25, 75)) / 100) / nv
                us.append(Fraction(mpmath.nstr(mpmath.tan(ang / 2), 20)).limit_denominator(den))
        verts = [_circle_point(u) for u in us]
        pts = list(verts)
        for u, v in edges:
            lam = Fraction(rng.randrange(300, 701), 1000)
            p, q = verts[u], verts[v]
            pts.append(Point(p.x + lam * (q.x - p.x), p.y + lam * (q.y - p.y)))
        if _placement_ok(pts, nv, edges):
            return SpanningInstance(G, nv, edges, sd, td, tuple(pts), seed, attempt)
    raise SpanningBuildError(f"no valid placement after {max_attempts} attempts")


def _check_guard(n: int) -> None:
    if n > GRAPH_GUARD:
        raise GuardExceeded(f"{n} vertices exceed the backtracking guard {GRAPH_GUARD}")


def _ham_path(adj: Sequence[Sequence[int]], start: int, end: int) -> Optional[list[int]]:
    n = len(adj)
    path = [start]
    seen = [False] * n
    seen[start] = True

    def rec() -> bool:
        v = path[-1]
        if len(path) == n:
            return v == end
        for w in adj[v]:
            if seen[w] or (w == end and len(path) < n - 1):
                continue
            seen[w] = True
            path.append(w)
            if rec():
                return True
            path.pop()
            seen[w] = False
        return False

    return list(path) if rec() else None


def find_ham_path(inst: SpanningInstance) -> Optional[list[int]]:
    """Hamiltonian path of the derived graph from s' to t', or None."""
    _check_guard(inst.n_vertices)
    return _ham_path(inst.adjacency(), inst.s_dummy, inst.t_dummy)


def find_ham_circuit_with_edge(G: CubicGraphInstance, e: Optional[tuple[int, int]] = None
                               ) -> Optional[list[int]]:
    """Hamiltonian circuit of ``G`` through edge ``e`` (default: the marked edge)."""
    _check_guard(G.n)
    s, t = tuple(sorted(e)) if e is not None else G.marked_edge
    adj = G.adjacency()
    if t not in adj[s]:
        raise ValidationError("marked-edge-missing", f"{(s, t)}")
    n = G.n
    cyc = [s, t]
    seen = [False] * n
    seen[s] = seen[t] = True

    def rec() -> bool:
        v = cyc[-1]
        if len(cyc) == n:
            return s in adj[v]
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                cyc.append(w)
                if rec():
                    return True
                cyc.pop()
                seen[w] = False
        return False

    return list(cyc) if rec() else None


def _check_path(H: Sequence[int], inst: SpanningInstance) -> None:
    adj = inst.adjacency()
    if len(H) != inst.n_vertices or set(H) != set(range(inst.n_vertices)):
        raise ValidationError("not-hamiltonian", "path must visit every vertex once")
    if H[0] != inst.s_dummy or H[-1] != inst.t_dummy:
        raise ValidationError("not-hamiltonian", "path must run from s' to t'")
    for u, v in zip(H, H[1:]):
        if v not in adj[u]:
            raise ValidationError("not-hamiltonian", f"{u}-{v} is not an edge")


def hampath_to_spanning_tour(H: Sequence[int], inst: SpanningInstance) -> Tour:
    """Vertex points along ``H``, then the unused edge points, then back."""
    _check_path(H, inst)
    used = {tuple(sorted(e)) for e in zip(H, H[1:])}
    rest = [j for j, e in enumerate(inst.edges) if tuple(sorted(e)) not in used]
    verts = [inst.vertex_point(v) for v in H] + [inst.edge_point(j) for j in rest]
    tour = Tour(tuple(verts))
    if tour.links != inst.graph.m + 2 or not tour.covers(inst.points):
        raise SpanningBuildError("constructed spanning tour failed validation")
    return tour


def _graph(n, edges, marked=None) -> CubicGraphInstance:
    return CubicGraphInstance(n, tuple(edges), marked or edges[0])


def standard_graphs() -> dict[str, CubicGraphInstance]:
    """Small cubic test graphs, each with its first edge marked."""
    k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    prism = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]
    k33 = [(i, j) for i in range(3) for j in range(3, 6)]
    cube = [(i, i ^ b) for i in range(8) for b in (1, 2, 4) if i < i ^ b]
    wagner = [(i, (i + 1) % 8) for i in range(8)] + [(i, i + 4) for i in range(4)]
    petersen = ([(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)]
                + [(5 + i, 5 + (i + 2) % 5) for i in range(5)])
    return {
        "k4": _graph(4, k4),
        "prism": _graph(6, prism),
        "k33": _graph(6, k33),
        "cube": _graph(8, cube),
        "wagner": _graph(8, wagner),
        "petersen": _graph(10, petersen),
    }
