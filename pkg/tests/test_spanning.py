from itertools import combinations

import pytest

from linecover import tours
from linecover.geometry import collinear, on_segment
from linecover.instances import CubicGraphInstance, ValidationError
from linecover.spanning import (GuardExceeded, build_spanning_instance, derived_graph,
                                find_ham_circuit_with_edge, find_ham_path,
                                hampath_to_spanning_tour, standard_graphs)

GRAPHS = standard_graphs()


def _with_marked(G, e):
    return CubicGraphInstance(G.n, G.edges, e)


def test_derived_graph_counts():
    n, edges, s, t = derived_graph(GRAPHS["k4"])
    assert n == 6 and len(edges) == 7


@pytest.mark.parametrize("name,count", [("k4", 13), ("prism", 18)])
def test_point_counts(name, count):
    assert len(build_spanning_instance(GRAPHS[name]).points) == count


def test_structure_k4():
    inst = build_spanning_instance(GRAPHS["k4"])
    P = inst.points
    for j, (u, v) in enumerate(inst.edges):
        e = inst.edge_point(j)
        assert on_segment(e, inst.vertex_point(u), inst.vertex_point(v))
        assert e not in (inst.vertex_point(u), inst.vertex_point(v))
    allowed = {frozenset((inst.vertex_point(u), inst.vertex_point(v), inst.edge_point(j)))
               for j, (u, v) in enumerate(inst.edges)}
    for t in combinations(P, 3):
        if collinear(*t):
            assert frozenset(t) in allowed


def test_non_cubic_rejected():
    with pytest.raises(ValidationError):
        CubicGraphInstance(4, ((0, 1), (1, 2), (2, 3), (3, 0)), (0, 1))


@pytest.mark.parametrize("name,links", [("k4", 8), ("prism", 11)])
def test_every_marked_edge_gives_m_plus_2(name, links):
    G = GRAPHS[name]
    for e in G.edges:
        inst = build_spanning_instance(_with_marked(G, e))
        H = find_ham_path(inst)
        assert H is not None
        tour = hampath_to_spanning_tour(H, inst)
        assert tour.links == links and tour.covers(inst.points)
        assert set(tour.vertices) <= set(inst.points)


@pytest.mark.parametrize("name", sorted(GRAPHS))
def test_circuit_iff_path(name):
    G = GRAPHS[name]
    for e in G.edges:
        Ge = _with_marked(G, e)
        circ = find_ham_circuit_with_edge(Ge)
        path = find_ham_path(build_spanning_instance(Ge))
        assert (circ is None) == (path is None)
        if circ is not None:
            assert sorted(circ) == list(range(G.n))
            assert {circ[0], circ[1]} == set(e)


def test_petersen_has_no_circuit():
    G = GRAPHS["petersen"]
    assert all(find_ham_circuit_with_edge(G, e) is None for e in G.edges)


def test_bad_path_rejected():
    inst = build_spanning_instance(GRAPHS["k4"])
    with pytest.raises(ValidationError):
        hampath_to_spanning_tour([inst.s_dummy, inst.t_dummy], inst)


def test_guard():
    n = 18
    ring = [(i, (i + 1) % n) for i in range(n)] + [(i, i + n // 2) for i in range(n // 2)]
    with pytest.raises(GuardExceeded):
        find_ham_circuit_with_edge(CubicGraphInstance(n, tuple(ring), (0, 1)))


def test_k4_exact_search_confirms_optimum():
    inst = build_spanning_instance(GRAPHS["k4"])
    _, links, optimal = tours.brute_minlink_spanning_tour(inst.points, cap=13)
    assert optimal and links == 8
