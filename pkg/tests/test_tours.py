import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from linecover.geometry import Point, TurnMeasure, collinear
from linecover.instances import Tour
from linecover.tours import (CapExceededError, brute_minlink_spanning_tour,
                             brute_minmax_turn_tour, brute_minsum_turn_tour, is_obtuse,
                             max_turn, sum_turn, validate_covering_tour)
from conftest import pts
from oracles import naive_minlink, naive_minmax, naive_minsum
from strategies import grid_sets

F = Fraction
COLLINEAR4 = pts((0, 0), (1, 0), (3, 0), (F(7, 2), 0))


def hexagon():
    """Rational points near the regular hexagon, on the unit circle."""
    out = []
    for k in range(6):
        u = F(math.tan((math.pi * k / 3 + 0.1) / 2)).limit_denominator(200)
        out.append(Point((1 - u * u) / (1 + u * u), 2 * u / (1 + u * u)))
    return out


def convex_equivalent(tour, cyclic):
    vs = list(tour.vertices)
    n = len(vs)
    i = vs.index(cyclic[0])
    rot = vs[i:] + vs[:i]
    return rot == cyclic or rot == [cyclic[0]] + cyclic[1:][::-1]


def _near_two_pi(s, err):
    with mpmath.workdps(60):
        return abs(s - 2 * mpmath.pi) <= err


def test_collinear_minmax_is_pi():
    _, worst = brute_minmax_turn_tour(COLLINEAR4)
    assert worst.is_pi


def test_hexagon_minmax_is_convex_order():
    H = hexagon()
    tour, worst = brute_minmax_turn_tour(H)
    assert convex_equivalent(tour, H)
    assert abs(float(worst) - math.pi / 3) < 0.01


def test_three_points():
    P = pts((0, 0), (4, 0), (1, 2))
    tour, worst = brute_minmax_turn_tour(P)
    interior = [math.pi - float(t) for t in tour.turns()]
    assert float(worst) == pytest.approx(math.pi - min(interior))
    _, s, err = brute_minsum_turn_tour(P)
    assert _near_two_pi(s, err)


def test_minsum_convex_and_collinear():
    H = hexagon()
    tour, s, err = brute_minsum_turn_tour(H)
    assert _near_two_pi(s, err) and convex_equivalent(tour, H)
    _, s, err = brute_minsum_turn_tour(COLLINEAR4)
    assert _near_two_pi(s, err)


def test_minlink_examples(square):
    assert brute_minlink_spanning_tour(pts((0, 0), (2, 0), (1, 3)))[1] == 3
    tour, links, opt = brute_minlink_spanning_tour(COLLINEAR4)
    assert (links, opt) == (2, True) and tour.covers(COLLINEAR4)
    assert brute_minlink_spanning_tour(square)[1] == 4


def test_caps():
    many = pts(*[(i, i * i) for i in range(10)])
    with pytest.raises(CapExceededError):
        brute_minmax_turn_tour(many)
    with pytest.raises(CapExceededError):
        brute_minsum_turn_tour(many, cap=5)
    with pytest.raises(CapExceededError):
        brute_minlink_spanning_tour(pts(*[(i, i * i) for i in range(13)]))
    tour, links, opt = brute_minlink_spanning_tour(many, node_cap=5)
    assert opt is False and links == 10 and tour.covers(many)


def test_validate_and_obtuse(square):
    sq = Tour(tuple(square))
    assert validate_covering_tour(sq, square) == {"links": 4, "covers_all": True}
    assert not validate_covering_tour(sq, square + pts((F(1, 2), F(1, 2))))["covers_all"]
    assert is_obtuse(sq)
    assert not is_obtuse(Tour(tuple(COLLINEAR4)))
    assert not is_obtuse(Tour(tuple(pts((0, 0), (10, 0), (5, 1)))))


@settings(max_examples=25)
@given(grid_sets(3, 6))
def test_solvers_match_naive_oracles(P):
    t, worst = brute_minmax_turn_tour(P)
    assert worst == naive_minmax(P) == max_turn(t)
    t, s, err = brute_minsum_turn_tour(P)
    assert abs(s - naive_minsum(P)) <= err
    assert abs(sum_turn(t) - s) <= err
    t, links, opt = brute_minlink_spanning_tour(P)
    assert opt and links == naive_minlink(P) == t.links <= len(P)
    assert t.covers(P) and set(t.vertices) <= set(P)


@settings(max_examples=25)
@given(grid_sets(3, 6), st.integers(0, 10), st.booleans())
def test_objectives_invariant_under_rotation_and_reversal(P, k, rev):
    t = Tour(tuple(P))
    u = t.rotated(k)
    if rev:
        u = u.reversed()
    assert max_turn(u) == max_turn(t)
    assert abs(sum_turn(u) - sum_turn(t)) < mpmath.mpf(10) ** -30
    assert u.links == t.links
    assert u.covers(P) == t.covers(P)


@settings(max_examples=25)
@given(grid_sets(3, 6))
def test_collinear_sets_always_give_pi(P):
    if all(collinear(P[0], P[1], p) for p in P[2:]):
        assert brute_minmax_turn_tour(P)[1].is_pi
        assert brute_minlink_spanning_tour(P)[1] == 2
