"""The ten acceptance criteria, each with its runtime limit."""

import random
import time
from fractions import Fraction
from itertools import product

import mpmath
import pytest

from linecover import adversary, cover, gadget, lattice, minmax, spanning, tours, triangle
from linecover.geometry import Point, TurnMeasure, candidate_lines, collinear, line_through
from linecover.instances import CubicGraphInstance
from conftest import record_acceptance
from oracles import naive_minlink, naive_minmax, naive_minsum

F = Fraction


def _grid_set(rnd, n, side=6):
    cells = rnd.sample([(x, y) for x in range(side + 1) for y in range(side + 1)], n)
    return [Point(F(x), F(y)) for x, y in cells]


def _sat_instances():
    out = [(gadget.THREE_CLAUSE_INSTANCE, 0)]
    for n in (2, 4):
        out += [(gadget.random_sat_instance(n, s), s) for s in range(10)]
    return out


@pytest.fixture(scope="module")
def sat_reports():
    reports = []
    for inst, seed in _sat_instances():
        t0 = time.perf_counter()
        rep = gadget.verify_sat_lemmas(inst, seed)
        rep["elapsed"] = time.perf_counter() - t0
        reports.append(rep)
    return reports


def test_criterion_01_segments():
    t0 = time.perf_counter()
    rows = adversary.greedy_ratio_experiment(2, 40, lines_k_max=0)
    elapsed = time.perf_counter() - t0
    ok = all(r["greedy_segments"] == sum(r["k"] // i for i in range(2, r["k"] + 1))
             and r["block_order_ok"] and r["witness_ok"]
             and adversary.ratio_meets_bound(r["ratio"], r["k"]) for r in rows)
    ok = ok and len(rows) == 39 and elapsed < 10
    record_acceptance(1, ok, f"segment adversary k=2..40 exact, {elapsed:.1f}s (< 10s)")
    assert ok


def test_criterion_02_lines():
    t0 = time.perf_counter()
    rows = adversary.greedy_ratio_experiment(2, 20, lines_k_max=20)
    elapsed = time.perf_counter() - t0
    ok = all(r["simple_crossings_ok"] and r["greedy_lines"] >= r["b_count"]
             and adversary.ratio_meets_bound(Fraction(r["greedy_lines"], r["k"]), r["k"])
             and adversary.ratio_meets_bound(r["ratio"], r["k"]) for r in rows)
    ok = ok and len(rows) == 19 and elapsed < 60
    record_acceptance(2, ok, f"line adversary k=2..20, simple crossings checked exhaustively, {elapsed:.1f}s (< 60s)")
    assert ok


def test_criterion_03_sat_lemmas(sat_reports):
    small = sat_reports[0]
    ok = (small["w_star"], small["x_star"], small["k_star"]) == (3, 11, 4)
    must = ("coverage_equals_4n_plus_w", "cover_upper_bound", "cover_implies_satisfied", "exact_completed")
    ok = ok and all(r["checks"][c] for r in sat_reports for c in must)
    ok = ok and all(r["passed"] and r["elapsed"] < 60 for r in sat_reports)
    ok = ok and len(sat_reports) - 1 >= 20
    slowest = max(r["elapsed"] for r in sat_reports)
    record_acceptance(3, ok, f"SAT lemmas on three-clause gadget + {len(sat_reports) - 1} random instances, "
                             f"slowest {slowest:.1f}s (< 60s)")
    assert ok


def test_criterion_04_canonicalize():
    rnd = random.Random(2024)
    gadgets = [gadget.build_gadget(gadget.THREE_CLAUSE_INSTANCE, 0)]
    gadgets += [gadget.build_gadget(gadget.random_sat_instance(4, s), s) for s in range(4)]
    cands = [candidate_lines(P.points) for P, _ in gadgets]
    t0 = time.perf_counter()
    bad = 0
    for trial in range(1000):
        g = trial % len(gadgets)
        (P, layout), lines = gadgets[g], cands[g]
        L = rnd.sample(lines, rnd.randint(0, min(12, len(lines))))
        out = gadget.canonicalize(L, layout)
        good = (gadget.is_canonical(out, layout) and len(out) <= len(L)
                and gadget.covered_count(P.points, out) >= gadget.covered_count(P.points, L)
                and gadget.canonicalize(out, layout) == out)
        bad += not good
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 60
    record_acceptance(4, ok, f"1000 canonicalize trials, {bad} failures, {elapsed:.1f}s (< 60s)")
    assert ok


def test_criterion_05_tour_oracles():
    rnd = random.Random(5)
    t0 = time.perf_counter()
    mismatches = 0
    for _ in range(50):
        P = _grid_set(rnd, rnd.randint(3, 7))
        tour, worst = tours.brute_minmax_turn_tour(P)
        mismatches += not (worst == naive_minmax(P) == tours.max_turn(tour))
        tour, s, err = tours.brute_minsum_turn_tour(P)
        mismatches += not abs(s - naive_minsum(P)) <= err
        tour, links, opt = tours.brute_minlink_spanning_tour(P)
        mismatches += not (opt and links == naive_minlink(P) == tour.links and tour.covers(P))
    collinear_ok = True
    for n in range(3, 8):
        P = [Point(F(i), F(2 * i)) for i in range(n)]
        collinear_ok &= tours.brute_minmax_turn_tour(P)[1].is_pi
        collinear_ok &= tours.brute_minlink_spanning_tour(P)[1] == 2
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and collinear_ok and elapsed < 300
    record_acceptance(5, ok, f"tour solvers vs naive oracles on 50 sets (n<=7), "
                             f"{mismatches} mismatches, {elapsed:.1f}s (< 300s)")
    assert ok


def test_criterion_06_spanning():
    t0 = time.perf_counter()
    graphs = spanning.standard_graphs()
    ok = True
    for name in ("k4", "prism"):
        G = graphs[name]
        for e in G.edges:
            inst = spanning.build_spanning_instance(CubicGraphInstance(G.n, G.edges, e))
            H = spanning.find_ham_path(inst)
            tour = spanning.hampath_to_spanning_tour(H, inst)
            ok &= tour.links == G.m + 2 and tour.covers(inst.points)
            if name == "k4":
                _, links, optimal = tours.brute_minlink_spanning_tour(inst.points, cap=13)
                ok &= optimal and links == G.m + 2
    for G in graphs.values():
        for e in G.edges:
            Ge = CubicGraphInstance(G.n, G.edges, e)
            circ = spanning.find_ham_circuit_with_edge(Ge)
            path = spanning.find_ham_path(spanning.build_spanning_instance(Ge))
            ok &= (circ is None) == (path is None)
    ok &= all(spanning.find_ham_circuit_with_edge(graphs["petersen"], e) is None
              for e in graphs["petersen"].edges)
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 600
    record_acceptance(6, ok, f"spanning reduction on K4/prism, K4 optimality, "
                             f"{len(graphs)} graphs cross-checked, {elapsed:.1f}s (< 600s)")
    assert ok


def test_criterion_07_triangle():
    t0 = time.perf_counter()
    rnd = random.Random(7)
    sets = [list(gadget.build_gadget(gadget.THREE_CLAUSE_INSTANCE, 0)[0].points)]
    sets += [_grid_set(rnd, rnd.randint(2, 7)) for _ in range(10)]
    ok = True
    for P in sets:
        tri = triangle.build_triangle_instance(P)
        ok &= tri.radius == F(1, 100) and tri.spread_degrees == 1
        ok &= triangle.check_triangle_instance(tri) == []
        sol = cover.exact_cover_points_by_lines(P)
        tour = triangle.lines_to_covering_tour(sol.chosen, tri)
        ok &= tour.links == 3 * sol.size and tour.covers(tri.points)
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 60
    record_acceptance(7, ok, f"triangle reduction on three-clause gadget + 10 random sets, {elapsed:.1f}s (< 60s)")
    assert ok


def test_criterion_08_minmax():
    t0 = time.perf_counter()
    P = [Point(F(x), F(y)) for x, y in ((0, 0), (1, 0), (0, 1), (1, 1))]
    c = minmax.build_minmax_instance(P, mu=1)
    ok = not c.scaled and c.t == c.t_required <= 10 ** 5
    ok &= c.s == minmax.chain_piece_count(len(c.lines))
    ok &= len(c.grid) == c.n + c.s * (c.t + 1 + 2 * c.n)
    ok &= minmax.check_curve_instance(c) == []
    L = [line_through(P[0], P[1]), line_through(P[2], P[3])]
    tour = minmax.lines_to_minmax_tour(L, c)
    worst = tours.max_turn(tour)
    ok &= worst.cmp_radians(minmax.turn_budget(c, 2)) <= 0
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 300
    record_acceptance(8, ok, f"min-max-turn construction, t={c.t}, {len(c.grid)} points, "
                             f"{elapsed:.1f}s (< 300s)")
    assert ok


def test_criterion_09_lattice():
    t0 = time.perf_counter()
    ok = lattice.lattice_min_turn(1)[0] == TurnMeasure.right()
    for N in (10, 15, 20):
        tm, _ = lattice.lattice_min_turn(N)
        ok &= tm.cmp_radians(F(1, 3 * N * N)) >= 0
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 600
    record_acceptance(9, ok, f"lattice minimum turn >= 1/(3N^2) for N=10,15,20; N=1 is pi/2, "
                             f"{elapsed:.1f}s (< 600s)")
    assert ok


def _harmonic_ok(greedy: int, opt: int, n: int) -> bool:
    # greedy <= (ln n + 1) * opt  <=>  exp(greedy/opt - 1) <= n
    with mpmath.workdps(50):
        return mpmath.exp(mpmath.mpf(greedy) / opt - 1) <= n


def test_criterion_10_global(sat_reports):
    rnd = random.Random(10)
    instances = [_grid_set(rnd, rnd.randint(1, 14)) for _ in range(60)]
    instances += [list(gadget.build_gadget(inst, seed)[0].points) for inst, seed in _sat_instances()]
    checked, ok = 0, True
    for P in instances:
        exact = cover.exact_cover_points_by_lines(P)
        if not exact.optimal:
            continue
        checked += 1
        ok &= _harmonic_ok(cover.greedy_cover_points_by_lines(P).size, exact.size, len(P))
    ok &= all(r["x_star"] <= 4 * r["n"] + r["m"] for r in sat_reports)
    record_acceptance(10, ok, f"greedy <= (ln n + 1) OPT on {checked} instances; "
                              f"x* <= 4n + m on {len(sat_reports)} gadgets")
    assert ok
