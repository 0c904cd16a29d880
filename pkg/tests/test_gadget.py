import random
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from linecover import gadget
from linecover.gadget import (THREE_CLAUSE_INSTANCE, assignment_to_lines, build_gadget, canonicalize,
                              covered_count, is_canonical, lines_to_assignment,
                              random_sat_instance, validate_gadget, verify_sat_lemmas)
from linecover.geometry import candidate_lines, collinear, line_through
from linecover.instances import SatInstance, ValidationError


def test_small_gadget_structure(small_gadget):
    P, layout = small_gadget
    assert len(P.points) == 11
    assert len(layout.triples) == 6
    assert validate_gadget(list(P.points), layout) is None
    triples = [t for t in combinations(P.points, 3) if collinear(*t)]
    assert len(triples) == 6
    assert not any(all(collinear(a, b, c) for c in quad[2:])
                   for quad in combinations(P.points, 4) for a, b in [quad[:2]])


def test_invalid_sat_rejected():
    with pytest.raises(ValidationError):
        SatInstance(2, ((1, 2), (1, 2), (-1, 2), (-1, -2)))


def test_random_instance_n4_builds():
    inst = random_sat_instance(4, 7)
    P, layout = build_gadget(inst, 7)
    assert len(P.points) == 22
    assert validate_gadget(list(P.points), layout) is None


def test_build_is_seed_deterministic():
    a, _ = build_gadget(THREE_CLAUSE_INSTANCE, 3)
    b, _ = build_gadget(THREE_CLAUSE_INSTANCE, 3)
    assert a == b


def test_assignment_examples(small_gadget):
    P, layout = small_gadget
    g_sat = [False, True]
    lines = assignment_to_lines(g_sat, layout)
    assert len(lines) == 4 and covered_count(P.points, lines) == 11
    lines = assignment_to_lines([True, True], layout)
    assert covered_count(P.points, lines) == 10
    assert lines_to_assignment(assignment_to_lines(g_sat, layout), layout) == g_sat


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_every_assignment_covers_4n_plus_satisfied(seed):
    inst = random_sat_instance(4, seed)
    P, layout = build_gadget(inst, seed)
    for g in product((False, True), repeat=4):
        lines = assignment_to_lines(g, layout)
        assert len(lines) == 8
        var_cov = sum(any(l.contains(P.points[layout.var_index(i, r)]) for l in lines)
                      for i in range(4) for r in range(1, 5))
        assert var_cov == 16
        assert covered_count(P.points, lines) == 16 + inst.satisfied(g)


def test_all_four_line_covers_give_good_assignments(small_gadget):
    P, layout = small_gadget
    cands = candidate_lines(P.points)
    masks = [sum(1 << i for i, p in enumerate(P.points) if l.contains(p)) for l in cands]
    full = (1 << 11) - 1
    found = 0
    for combo in combinations(range(len(cands)), 4):
        if masks[combo[0]] | masks[combo[1]] | masks[combo[2]] | masks[combo[3]] == full:
            found += 1
            g = lines_to_assignment([cands[c] for c in combo], layout)
            assert THREE_CLAUSE_INSTANCE.satisfied(g) >= 3
    assert found > 0


def test_only_variable_lines_gives_some_assignment(small_gadget):
    _, layout = small_gadget
    g = lines_to_assignment([layout.e_lines[0][(1, 2)]], layout)
    assert len(g) == 2


def test_canonicalize_examples(small_gadget):
    P, layout = small_gadget
    canon = assignment_to_lines([True, False], layout)
    assert canonicalize(canon, layout) == canon
    bad = [layout.e_lines[0][(1, 4)]]
    out = canonicalize(bad, layout)
    assert len(out) == 1
    assert layout.line_pair(0, out[0]) in gadget.ALLOWED


@given(st.integers(0, 2 ** 32), st.integers(0, 8))
def test_canonicalize_properties(seed, size):
    P, layout = build_gadget(THREE_CLAUSE_INSTANCE, 0)
    cands = candidate_lines(P.points)
    rnd = random.Random(seed)
    L = rnd.sample(cands, min(size, len(cands)))
    out = canonicalize(L, layout)
    assert is_canonical(out, layout)
    assert len(out) <= len(set(L))
    assert covered_count(P.points, out) >= covered_count(P.points, L)
    assert canonicalize(out, layout) == out


def test_verify_sat_lemmas_small_gadget():
    rep = verify_sat_lemmas(THREE_CLAUSE_INSTANCE, 0)
    assert (rep["w_star"], rep["x_star"], rep["k_star"]) == (3, 11, 4)
    assert rep["passed"], rep["checks"]


def test_fully_satisfiable_instance_has_small_cover():
    rep = verify_sat_lemmas(THREE_CLAUSE_INSTANCE, 1)
    assert rep["w_star"] == rep["m"]
    assert rep["k_star"] <= 2 * rep["n"]
