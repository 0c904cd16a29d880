from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from linecover.adversary import (build_gk, find_triple_crossing, dual_line, dualize, embed_lines,
                                 embed_segments, greedy_ratio_experiment, harmonic_b_count,
                                 ratio_meets_bound)
from linecover.cover import (greedy_cover_lines_by_points, greedy_cover_points_by_lines,
                             point_candidates_for_lines)
from linecover.geometry import Line, Point, intersect, on_line
from linecover.instances import incidence

F = Fraction


@pytest.mark.parametrize("k,b,e", [(6, 8, 27), (2, 1, 2), (3, 2, 5)])
def test_build_gk_counts(k, b, e):
    g = build_gk(k)
    assert g.n_b == b and len(g.edges) == e


def test_build_gk_rejects_small():
    with pytest.raises(ValueError):
        build_gk(1)


@given(st.integers(2, 25))
def test_build_gk_invariants(k):
    g = build_gk(k)
    assert g.n_b == harmonic_b_count(k) == sum(k // i for i in range(2, k + 1))
    assert len(g.edges) == sum((k // i) * i for i in range(2, k + 1))
    for i, block in g.blocks.items():
        assert len(block) == k // i
        assert all(len(set(nb)) == i for nb in block)
        flat = [a for nb in block for a in nb]
        assert len(flat) == len(set(flat))
    # each block is consecutive in the left-to-right B order
    idx = [i for i, _ in g.b_vertices]
    assert idx == sorted(idx)


def test_embed_segments_shape():
    segs = embed_segments(build_gk(6)).segments
    assert len(segs) == 27
    assert all(s.y == 1 and t.y == 0 for s, t in segs)
    two = embed_segments(build_gk(2)).segments
    assert len(two) == 2 and two[0][1] == two[1][1]


def test_k2_greedy_picks_b_vertex():
    row = greedy_ratio_experiment(2, 2)[0]
    assert row["greedy_segments"] == 1 and row["block_order_ok"]


def _crossings_simple_brute(lines, vertices):
    vset = set(vertices)
    for l1, l2 in combinations(lines, 2):
        q = intersect(l1, l2)
        if q is None or q in vset:
            continue
        if sum(on_line(q, l) for l in lines) != 2:
            return False
    return True


@pytest.mark.parametrize("k", [3, 4, 6])
def test_embed_lines_crossings_are_simple(k):
    L, pos = embed_lines(build_gk(k), return_positions=True)
    assert len(L.lines) == sum((k // i) * i for i in range(2, k + 1))
    verts = [Point(F(a), F(1)) for a in range(k)] + [Point(F(b), F(0)) for b in pos]
    assert _crossings_simple_brute(list(L.lines), verts)
    assert find_triple_crossing(L, verts) is None
    assert all(l.b != 0 for l in L.lines)  # no vertical line
    assert all(abs(b - j) < F(1, 4) for j, b in enumerate(pos))


def test_find_triple_crossing_detects_violation():
    lines = [Line(1, 0, 0), Line(0, 1, 0), Line(1, -1, 0)]
    assert find_triple_crossing(lines, []) == Point(F(0), F(0))
    assert find_triple_crossing(lines, [Point(F(0), F(0))]) is None


def test_experiment_rows():
    rows = greedy_ratio_experiment(2, 8, lines_k_max=8)
    for r in rows:
        k = r["k"]
        assert r["greedy_segments"] == harmonic_b_count(k)
        assert r["greedy_lines"] >= harmonic_b_count(k)
        assert r["simple_crossings_ok"] and r["witness_ok"] and r["block_order_ok"]
        assert ratio_meets_bound(r["ratio"], k)
    six = rows[4]
    assert (six["greedy_segments"], six["witness"], six["ratio"]) == (8, 6, F(4, 3))


def test_k30_ratio():
    r = greedy_ratio_experiment(30, 30, lines_k_max=0)[0]
    assert r["greedy_segments"] == 81 and r["ratio"] == F(27, 10)
    assert r["ln_bound"] == pytest.approx(1.434, abs=1e-3)
    assert r["greedy_lines"] is None


def test_ratio_bound_is_tight_enough():
    # ln(k+1) - 2 at k = 20 is about 1.0445
    assert ratio_meets_bound(F(1045, 1000), 20)
    assert not ratio_meets_bound(F(1044, 1000), 20)


def test_dualize_examples():
    conc = dualize([Line(1, -1, 0), Line(2, -1, 0), Line(3, -1, 0)])
    a, b, c = conc.points
    assert (b.x - a.x) * (c.y - a.y) == (b.y - a.y) * (c.x - a.x)
    par = dualize([Line(1, -1, 0), Line(1, -1, 5)])
    assert par.points[0].x == par.points[1].x


def test_dualize_preserves_incidence_k6():
    L = embed_lines(build_gk(6))
    D = dualize(L)
    shear = F(D.annotations["shear"])
    primal_pts, _ = point_candidates_for_lines(L.lines)
    primal = incidence(primal_pts, list(L.lines))
    dual = incidence(D, [dual_line(p, shear) for p in primal_pts])
    assert (primal == dual.T).all()
    assert (greedy_cover_points_by_lines(D).size
            == greedy_cover_lines_by_points(L).size)


def test_dualize_shears_vertical_lines():
    D = dualize([Line(1, 0, 2), Line(0, 1, 1), Line(1, 1, 0)])
    s = F(D.annotations["shear"])
    assert s != 0
    pts = [Point(F(2), F(5)), Point(F(7), F(1)), Point(F(3), F(-3))]
    for p in pts:
        for j, l in enumerate([Line(1, 0, 2), Line(0, 1, 1), Line(1, 1, 0)]):
            assert on_line(p, l) == on_line(D.points[j], dual_line(p, s))
