from fractions import Fraction

import mpmath
import pytest

from linecover.geometry import TurnMeasure, collinear, turn
from linecover.lattice import (lattice_bound_ok, lattice_min_turn, lattice_min_turn_brute,
                               lattice_report_row)


def test_n1_is_right_angle():
    tm, _ = lattice_min_turn(1)
    assert tm == TurnMeasure.right()


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_matches_triple_enumeration(N):
    tm, witness = lattice_min_turn(N)
    assert tm == lattice_min_turn_brute(N)
    a, b, c = witness
    assert not collinear(a, b, c)
    assert turn(a, b, c) == tm
    assert all(0 <= v <= N for p in witness for v in p)


def test_monotone_in_n():
    values = [lattice_min_turn(N)[0] for N in range(1, 9)]
    assert all(x >= y for x, y in zip(values, values[1:]))


def test_n10_bound_and_row():
    tm, _ = lattice_min_turn(10)
    assert lattice_bound_ok(tm, 10)
    assert tm.cmp_radians(Fraction(1, 300)) > 0
    row = lattice_report_row(10)
    assert row["bound_ok"] and row["min_turn_denom_bound"] == 300
    assert row["min_turn_num"].startswith("0.0312")
