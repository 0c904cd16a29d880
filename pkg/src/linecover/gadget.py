"""Point gadget for E3-Occ-Max-E2-SAT and the line-set transformations on it.

Each variable ``v_i`` gets four points ``v_i^1..v_i^4``; each clause ``c_j``
one point.  Besides pairs, the only collinear triples are three per
variable, each a clause point with two points of that variable:

* two positive occurrences (c_r, c_s), one negative (c_t):
  ``c_r v1 v2``, ``c_s v3 v4``, ``c_t v1 v3``;
* two negative occurrences (c_r, c_s), one positive (c_t):
  ``c_r v1 v3``, ``c_s v2 v4``, ``c_t v1 v2``.

Selecting ``{e12, e34}`` encodes *true*, ``{e13, e24}`` *false*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Optional, Sequence

from ._random import stream
from .cover import exact_cover_points_by_lines, exact_max_coverage, line_candidates
from .geometry import Line, Point, fresh_line_through, intersect, line_through, on_line
from .instances import PointSetInstance, SatInstance, ValidationError

__all__ = [
    "GadgetLayout",
    "GadgetError",
    "THREE_CLAUSE_INSTANCE",
    "PAIRS",
    "ALLOWED",
    "build_gadget",
    "validate_gadget",
    "is_canonical",
    "canonicalize",
    "assignment_to_lines",
    "lines_to_assignment",
    "covered_count",
    "random_sat_instance",
    "verify_sat_lemmas",
]

PAIRS = ((1, 2), (3, 4), (1, 3), (2, 4), (1, 4), (2, 3))
ALLOWED = PAIRS[:4]
TRUE_PAIR = ((1, 2), (3, 4))
FALSE_PAIR = ((1, 3), (2, 4))
_PARTNER = {(1, 2): (3, 4), (3, 4): (1, 2), (1, 3): (2, 4), (2, 4): (1, 3)}

THREE_CLAUSE_INSTANCE = SatInstance(2, ((1, 2), (-1, 2), (-1, -2)))


class GadgetError(RuntimeError):
    pass


@dataclass
class GadgetLayout:
    inst: SatInstance
    points: tuple[Point, ...]
    # e_lines[i][(r, s)]: line through v_{i+1}^r and v_{i+1}^s
    e_lines: list[dict[tuple[int, int], Line]]
    # (clause j, variable i, (r, s)), all 0-based except the point labels
    triples: list[tuple[int, int, tuple[int, int]]]
    seed: int = 0
    attempts: int = 1

    @property
    def n(self) -> int:
        return self.inst.n

    @property
    def m(self) -> int:
        return self.inst.m

    def var_index(self, i: int, r: int) -> int:
        """Point index of ``v_{i+1}^r``."""
        return 4 * i + (r - 1)

    def clause_index(self, j: int) -> int:
        return 4 * self.n + j

    def variable_of(self, p: int) -> Optional[int]:
        return p // 4 if p < 4 * self.n else None

    def label_of(self, p: int) -> int:
        return p % 4 + 1

    def roles(self) -> list[str]:
        return ([f"v{i + 1}^{r}" for i in range(self.n) for r in range(1, 5)]
                + [f"c{j + 1}*" for j in range(self.m)])

    def line_pair(self, i: int, line: Line) -> Optional[tuple[int, int]]:
        for pair, l in self.e_lines[i].items():
            if l == line:
                return pair
        return None

    def to_annotations(self) -> dict:
        return {
            "roles": self.roles(),
            "n": self.n,
            "clauses": [list(c) for c in self.inst.clauses],
            "triples": [[j, i, list(rs)] for j, i, rs in self.triples],
            "seed": self.seed,
        }


def _variable_triples(inst: SatInstance) -> list[tuple[int, int, tuple[int, int]]]:
    triples = []
    for i in range(inst.n):
        v = i + 1
        pos = [j for j, c in enumerate(inst.clauses) if v in c]
        neg = [j for j, c in enumerate(inst.clauses) if -v in c]
        if len(pos) == 2:
            (r, s), t = pos, neg[0]
            triples += [(r, i, (1, 2)), (s, i, (3, 4)), (t, i, (1, 3))]
        else:
            (r, s), t = neg, pos[0]
            triples += [(r, i, (1, 3)), (s, i, (2, 4)), (t, i, (1, 2))]
    return triples


def validate_gadget(points: Sequence[Point], layout: GadgetLayout) -> Optional[str]:
    """Exhaustive structural check; returns a reason string or ``None``."""
    pts = list(points)
    if len(set(pts)) != len(pts):
        return "coincident points"
    if len(pts) != 4 * layout.n + layout.m:
        return "wrong point count"
    lines, masks = line_candidates(pts)
    prescribed = set()
    for j, i, (r, s) in layout.triples:
        prescribed.add(frozenset((layout.clause_index(j), layout.var_index(i, r),
                                  layout.var_index(i, s))))
    rich = set()
    for m in masks:
        c = m.bit_count()
        if c >= 4:
            return "four collinear points"
        if c == 3:
            rich.add(frozenset(t for t in range(len(pts)) if m >> t & 1))
    if rich != prescribed:
        return "collinear triples differ from the prescribed ones"
    return None


def build_gadget(inst: SatInstance, seed: int = 0, max_attempts: int = 2000):
    """Place the ``4n + m`` points; returns ``(PointSetInstance, GadgetLayout)``.

    Variable points get random coordinates with denominator 10 inside
    disjoint boxes; clause points are exact intersections of the two
    prescribed lines through them.  Any accidental coincidence or
    collinearity triggers a resample.
    """
    if not isinstance(inst, SatInstance):
        raise ValidationError("not-sat", "expected a SatInstance")
    triples = _variable_triples(inst)
    by_clause: dict[int, list[tuple[int, tuple[int, int]]]] = {}
    for j, i, rs in triples:
        by_clause.setdefault(j, []).append((i, rs))
    rng = stream(seed, "gadget")
    n, m = inst.n, inst.m
    for attempt in range(1, max_attempts + 1):
        vpts = []
        for i in range(n):
            for _ in range(4):
                vpts.append(Point(Fraction(10 * i * 10 + rng.randint(0, 60), 10),
                                  Fraction(rng.randint(0, 60), 10)))
        if len(set(vpts)) < 4 * n:
            continue
        try:
            e_lines = [{(r, s): line_through(vpts[4 * i + r - 1], vpts[4 * i + s - 1])
                        for r, s in PAIRS} for i in range(n)]
        except ValueError:
            continue
        cpts = []
        for j in range(m):
            (i1, p1), (i2, p2) = by_clause[j]
            q = intersect(e_lines[i1][p1], e_lines[i2][p2])
            if q is None:
                break
            cpts.append(q)
        if len(cpts) < m:
            continue
        pts = tuple(vpts + cpts)
        layout = GadgetLayout(inst, pts, e_lines, triples, seed, attempt)
        if validate_gadget(pts, layout) is None:
            return PointSetInstance(pts, layout.to_annotations()), layout
    raise GadgetError(f"resample budget exhausted (seed={seed})")


def covered_count(points: Sequence[Point], lines: Sequence[Line]) -> int:
    return sum(any(on_line(p, l) for l in lines) for p in points)


def is_canonical(lines: Sequence[Line], layout: GadgetLayout) -> bool:
    pts = layout.points
    for i in range(layout.n):
        li = {l for l in lines
              if any(on_line(pts[layout.var_index(i, r)], l) for r in range(1, 5))}
        if len(li) > 2:
            return False
        pairs = set()
        for l in li:
            pair = layout.line_pair(i, l)
            if pair not in ALLOWED:
                return False
            pairs.add(pair)
        if len(pairs) == 2 and pairs not in ({(1, 2), (3, 4)}, {(1, 3), (2, 4)}):
            return False
    return True


class _Transform:
    """Line list plus the point-to-line map ``f`` of the canonicalization."""

    def __init__(self, lines: Sequence[Line], layout: GadgetLayout):
        self.layout = layout
        self.pts = layout.points
        self.slots: dict[int, Line] = {}
        self.next_slot = 0
        self.f: dict[int, int] = {}
        for l in lines:
            self.add(l)
        for p, pt in enumerate(self.pts):
            for s, l in self.slots.items():
                if on_line(pt, l):
                    self.f[p] = s
                    break

    def add(self, line: Line) -> int:
        for s, l in self.slots.items():
            if l == line:
                return s
        s = self.next_slot
        self.next_slot += 1
        self.slots[s] = line
        return s

    def remove(self, s: int) -> None:
        del self.slots[s]
        for p in [p for p, t in self.f.items() if t == s]:
            del self.f[p]

    def mapped_to(self, s: int) -> list[int]:
        return sorted(p for p, t in self.f.items() if t == s)

    def var_mapped(self, s: int) -> list[int]:
        return [p for p in self.mapped_to(s) if self.layout.variable_of(p) is not None]

    def line_type(self, s: int) -> int:
        vs = self.var_mapped(s)
        if not vs:
            return 0
        owners = [self.layout.variable_of(p) for p in vs]
        if any(owners.count(o) >= 2 for o in owners):
            return 2
        return 1

    def lf(self, i: int) -> set[int]:
        return {self.f[self.layout.var_index(i, r)] for r in range(1, 5)
                if self.layout.var_index(i, r) in self.f}

    def map_clause_points(self, s: int) -> None:
        """Map unmapped clause points lying on slot ``s`` to it."""
        for j in range(self.layout.m):
            p = self.layout.clause_index(j)
            if p not in self.f and on_line(self.pts[p], self.slots[s]):
                self.f[p] = s

    def e_line(self, i: int, r: int, s: int) -> Line:
        return self.layout.e_lines[i][(min(r, s), max(r, s))]

    # step 1: merge two type-1 lines of one variable into a type-2 line
    def step_merge(self) -> None:
        changed = True
        while changed:
            changed = False
            for i in range(self.layout.n):
                lfi = self.lf(i)
                if len(lfi) <= 2:
                    continue
                ones = sorted(s for s in lfi if self.line_type(s) == 1)
                s1, s2 = ones[0], ones[1]
                v1 = [p for p in self.var_mapped(s1) if self.layout.variable_of(p) == i][0]
                v2 = [p for p in self.var_mapped(s2) if self.layout.variable_of(p) == i][0]
                others = [p for s in (s1, s2) for p in self.mapped_to(s) if p not in (v1, v2)]
                old = {s1: self.slots[s1], s2: self.slots[s2]}
                origin = {p: s for s in (s1, s2) for p in self.mapped_to(s) if p not in (v1, v2)}
                self.remove(s1)
                self.remove(s2)
                e = self.add(self.e_line(i, self.layout.label_of(v1), self.layout.label_of(v2)))
                self.f[v1] = self.f[v2] = e
                if len(others) == 2:
                    o = self.add(line_through(self.pts[others[0]], self.pts[others[1]]))
                    for p in others:
                        self.f[p] = o
                elif len(others) == 1:
                    o = self.add(old[origin[others[0]]])
                    self.f[others[0]] = o
                changed = True
                break

    # step 2: type-0 lines must avoid all variable points
    def step_rotate(self) -> None:
        var_pts = [self.pts[p] for p in range(4 * self.layout.n)]
        for s in sorted(self.slots):
            if self.line_type(s) != 0:
                continue
            mapped = self.mapped_to(s)
            if not mapped:
                self.remove(s)
                continue
            if not any(on_line(v, self.slots[s]) for v in var_pts):
                continue
            # touches a variable point, so it holds at most one clause point
            (c,) = mapped
            self.remove(s)
            t = self.add(fresh_line_through(self.pts[c], self.pts))
            self.f[c] = t

    # step 3: replace each type-1 line by a line through two points of one variable
    def step_type1(self) -> None:
        while True:
            ones = sorted(s for s in self.slots if self.line_type(s) == 1)
            if not ones:
                return
            s = ones[0]
            vp = self.var_mapped(s)[0]
            i, r = self.layout.variable_of(vp), self.layout.label_of(vp)
            free = [q for q in range(1, 5) if self.layout.var_index(i, q) not in self.f]
            # prefer a partner giving one of the four allowed lines
            free.sort(key=lambda q: (tuple(sorted((r, q))) not in ALLOWED, q))
            q = free[0]
            self.remove(s)
            e = self.add(self.e_line(i, r, q))
            self.f[vp] = e
            self.f[self.layout.var_index(i, q)] = e
            self.map_clause_points(e)

    def _gain(self, i: int, pair: tuple[int, int]) -> int:
        line = self.layout.e_lines[i][pair]
        return sum(on_line(self.pts[self.layout.clause_index(j)], line)
                   and self.layout.clause_index(j) not in self.f
                   for j in range(self.layout.m))

    # step 4: swap e14 / e23 for allowed lines
    def step_pairs(self) -> None:
        for i in range(self.layout.n):
            lfi = sorted(self.lf(i))
            pairs = {s: self.layout.line_pair(i, self.slots[s]) for s in lfi}
            if len(lfi) == 1 and pairs[lfi[0]] in ((1, 4), (2, 3)):
                (s,) = lfi
                self.remove(s)
                best = max(ALLOWED, key=lambda pr: (self._gain(i, pr), -ALLOWED.index(pr)))
                e = self.add(self.layout.e_lines[i][best])
                for r in best:
                    self.f[self.layout.var_index(i, r)] = e
                self.map_clause_points(e)
            elif len(lfi) == 2 and set(pairs.values()) == {(1, 4), (2, 3)}:
                for s in lfi:
                    self.remove(s)
                choice = max((TRUE_PAIR, FALSE_PAIR),
                             key=lambda pp: (sum(self._gain(i, pr) for pr in pp),
                                             pp == TRUE_PAIR))
                for pr in choice:
                    e = self.add(self.layout.e_lines[i][pr])
                    for r in pr:
                        self.f[self.layout.var_index(i, r)] = e
                    self.map_clause_points(e)

    def result(self) -> list[Line]:
        return [self.slots[s] for s in sorted(self.slots)]


def canonicalize(lines: Sequence[Line], layout: GadgetLayout) -> list[Line]:
    """Turn any line set into a canonical one, no larger, covering no fewer points.

    Canonical input is returned unchanged (duplicates removed).
    """
    lines = list(dict.fromkeys(lines))
    if is_canonical(lines, layout):
        return lines
    t = _Transform(lines, layout)
    t.step_merge()
    t.step_rotate()
    t.step_type1()
    t.step_pairs()
    return t.result()


def assignment_to_lines(assignment: Sequence[bool], layout: GadgetLayout) -> list[Line]:
    out = []
    for i, val in enumerate(assignment):
        for pair in (TRUE_PAIR if val else FALSE_PAIR):
            out.append(layout.e_lines[i][pair])
    return out


def lines_to_assignment(lines: Sequence[Line], layout: GadgetLayout) -> list[bool]:
    """Assignment read off a canonicalized line set.

    Lines touching no variable point are traded for the missing partner line
    of some under-covered variable first.  When ``len(lines) <= 2n`` the
    result satisfies at least ``covered(lines) - 4n`` clauses.
    """
    canon = canonicalize(lines, layout)
    pts = layout.points
    n = layout.n

    def var_pairs(i, current):
        return [layout.line_pair(i, l) for l in current
                if any(on_line(pts[layout.var_index(i, r)], l) for r in range(1, 5))]

    current = list(canon)
    while True:
        free_lines = [l for l in current
                      if not any(on_line(pts[p], l) for p in range(4 * n))]
        short = [i for i in range(n) if len(var_pairs(i, current)) < 2]
        if not free_lines or not short:
            break
        # drop the free line covering the fewest points only it covers
        def own(l):
            rest = [x for x in current if x != l]
            return sum(on_line(p, l) and not any(on_line(p, x) for x in rest) for p in pts)
        victim = min(free_lines, key=own)
        i = short[0]
        have = var_pairs(i, current)
        new = _PARTNER[have[0]] if have else TRUE_PAIR[0]
        current.remove(victim)
        current.append(layout.e_lines[i][new])
    assignment = []
    for i in range(n):
        have = var_pairs(i, current)
        assignment.append(not have or have[0] in TRUE_PAIR)
    return assignment


def random_sat_instance(n: int, seed: int = 0) -> SatInstance:
    """Random valid E3-Occ-E2-SAT instance with mixed-sign occurrences (n even)."""
    if n < 2 or n % 2:
        raise ValueError("n must be even and at least 2")
    rng = stream(seed, f"sat-instance-{n}")
    while True:
        occ = []
        for v in range(1, n + 1):
            signs = [1, 1, -1] if rng.random() < 0.5 else [-1, -1, 1]
            occ += [s * v for s in signs]
        rng.shuffle(occ)
        clauses = [(occ[2 * j], occ[2 * j + 1]) for j in range(len(occ) // 2)]
        if all(abs(a) != abs(b) for a, b in clauses):
            return SatInstance(n, tuple(clauses))


def _ceil_half(x: int) -> int:
    return -(-x // 2)


def verify_sat_lemmas(inst: SatInstance, seed: int = 0,
                      node_cap: Optional[int] = None) -> dict:
    """Brute-force check of the gadget's assignment/line-cover correspondences.

    Computes ``w*`` over all assignments, ``x*`` (best coverage with 2n
    lines) and ``k*`` (minimum cover) exactly, then checks every identity and
    bound.  The report's ``passed`` is true iff every check holds.
    """
    P, layout = build_gadget(inst, seed)
    pts = list(P.points)
    n, m = inst.n, inst.m
    checks: dict[str, bool] = {}
    counterexamples: list[dict] = []

    structural = validate_gadget(pts, layout)
    checks["structure"] = structural is None

    best_w, best_g = -1, None
    per_assignment_ok = True
    for bits in product((False, True), repeat=n):
        w = inst.satisfied(bits)
        if w > best_w:
            best_w, best_g = w, list(bits)
        cov = covered_count(pts, assignment_to_lines(bits, layout))
        if cov != 4 * n + w:
            per_assignment_ok = False
            counterexamples.append({"check": "assignment_coverage",
                                    "assignment": list(bits), "covered": cov, "satisfied": w})
    w_star = best_w
    checks["assignment_coverage"] = per_assignment_ok

    xsol = exact_max_coverage(pts, 2 * n, node_cap=node_cap)
    x_star = len(xsol.covered)
    ksol = exact_cover_points_by_lines(pts, node_cap=node_cap)
    k_star = ksol.size
    exact = bool(xsol.optimal and ksol.optimal)
    checks["exact_completed"] = exact

    checks["coverage_equals_4n_plus_w"] = x_star == 4 * n + w_star
    g_back = lines_to_assignment(xsol.chosen, layout)
    checks["assignment_recovered"] = inst.satisfied(g_back) >= x_star - 4 * n

    # direct cover from the best assignment plus paired unsatisfied clause points
    direct = assignment_to_lines(best_g, layout)
    unsat = [pts[layout.clause_index(j)] for j in range(m)
             if not inst.clause_satisfied(j, best_g)]
    for a in range(0, len(unsat) - 1, 2):
        direct.append(line_through(unsat[a], unsat[a + 1]))
    if len(unsat) % 2:
        direct.append(fresh_line_through(unsat[-1], pts))
    cover_bound = 2 * n + _ceil_half(m - w_star)
    checks["pairing_cover_witness"] = (covered_count(pts, direct) == len(pts)
                                 and len(direct) <= cover_bound)
    checks["cover_upper_bound"] = k_star <= cover_bound

    contra = True
    for w in range(0, m + 1):
        if k_star <= 2 * n + (m - w) // 2 and not w_star >= w:
            contra = False
            counterexamples.append({"check": "cover_implies_satisfied", "w": w})
    checks["cover_implies_satisfied"] = contra

    checks["coverage_at_most_4n_plus_m"] = x_star <= 4 * n + m
    checks["coverage_below_5w"] = x_star < 5 * w_star
    checks["k_le_2n_plus_m_le_4w"] = k_star <= 2 * n + m <= 4 * w_star
    checks["canonical_optimum"] = is_canonical(canonicalize(ksol.chosen, layout), layout)

    return {
        "n": n,
        "m": m,
        "seed": seed,
        "points": len(pts),
        "w_star": w_star,
        "x_star": x_star,
        "k_star": k_star,
        "best_assignment": best_g,
        "checks": checks,
        "passed": all(checks.values()),
        "counterexamples": counterexamples,
    }
