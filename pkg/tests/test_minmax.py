from fractions import Fraction

import mpmath
import pytest

from linecover import cover
from linecover.geometry import Point, line_through, min_nonzero_turn
from linecover.minmax import (build_minmax_instance, chain_piece_count, check_curve_instance,
                              lines_to_minmax_tour, minmax_tour_order, order_max_turn,
                              required_t, turn_budget)
from conftest import pts

TRIANGLE = pts((0, 0), (4, 0), (1, 3))
TWO_LINES = pts((0, 0), (1, 0), (0, 1), (1, 1))


def test_piece_count_formula():
    assert chain_piece_count(3) == 15
    assert chain_piece_count(6) == 27


def test_required_t_matches_formula():
    alpha = min_nonzero_turn(TRIANGLE)
    expect = mpmath.ceil(9 * 9 * mpmath.pi / (alpha.mp_radians() / 3))
    assert required_t(3, alpha, 1) == int(expect)
    assert required_t(4, min_nonzero_turn(TWO_LINES), 1) == 1152


def test_capped_triangle_instance():
    c = build_minmax_instance(TRIANGLE, t_cap=50)
    assert c.s == 15 and c.t == 50 and c.scaled
    assert c.t_required > 50
    assert len(c.grid) == 3 + 15 * (50 + 1 + 6)
    assert check_curve_instance(c) == []


@pytest.fixture(scope="module")
def square_curve():
    return build_minmax_instance(TWO_LINES, mu=1)


def test_square_instance_structure(square_curve):
    c = square_curve
    assert not c.scaled and c.t == 1152
    assert len(c.grid) == c.n + c.s * (c.t + 1 + 2 * c.n)
    assert check_curve_instance(c) == []


def test_square_tour_within_budget(square_curve):
    c = square_curve
    L = [line_through(TWO_LINES[0], TWO_LINES[1]), line_through(TWO_LINES[2], TWO_LINES[3])]
    order = minmax_tour_order(L, c)
    assert sorted(order) == list(range(len(c.grid)))
    worst, _ = order_max_turn(c, order)
    assert worst.cmp_radians(turn_budget(c, 2)) <= 0
    tour = lines_to_minmax_tour(L, c)
    assert len(tour.vertices) == len(c.grid)


def test_rejects_bad_mu():
    with pytest.raises(ValueError):
        build_minmax_instance(TWO_LINES, mu=0)
