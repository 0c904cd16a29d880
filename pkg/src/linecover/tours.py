"""Brute-force tour optimizers and tour validators.

Circular orders are enumerated once each: the first vertex is fixed and the
direction is fixed by requiring ``order[1] < order[-1]``.
"""

from __future__ import annotations

from itertools import permutations
from typing import Optional, Sequence

import mpmath

from .geometry import Point, TurnMeasure, as_point, on_segment
from .instances import PointSetInstance, Tour

__all__ = [
    "CapExceededError",
    "MINSUM_DPS",
    "max_turn",
    "sum_turn",
    "brute_minmax_turn_tour",
    "brute_minsum_turn_tour",
    "brute_minlink_spanning_tour",
    "validate_covering_tour",
    "is_obtuse",
]

MINSUM_DPS = 40


class CapExceededError(ValueError):
    pass


def _points(P) -> list[Point]:
    if isinstance(P, PointSetInstance):
        return list(P.points)
    return [as_point(p) for p in P]


def max_turn(t: Tour) -> TurnMeasure:
    return max(t.turns())


def sum_turn(t: Tour, dps: int = MINSUM_DPS):
    with mpmath.workdps(dps):
        return mpmath.fsum(x.mp_radians(dps) for x in t.turns())


def _circular_orders(n: int):
    rest = range(1, n)
    for perm in permutations(rest):
        if n >= 3 and perm[0] > perm[-1]:
            continue
        yield (0,) + perm


def _turn_table(pts: list[Point]) -> dict[tuple[int, int, int], TurnMeasure]:
    n = len(pts)
    return {(i, j, k): TurnMeasure.from_points(pts[i], pts[j], pts[k])
            for i in range(n) for j in range(n) for k in range(n) if i != j and j != k}


def _check_size(n: int, cap: Optional[int], lo: int) -> None:
    if n < lo:
        raise ValueError(f"need at least {lo} points")
    if cap is not None and n > cap:
        raise CapExceededError(f"{n} points exceed cap {cap}")


def brute_minmax_turn_tour(P, cap: Optional[int] = 9) -> tuple[Tour, TurnMeasure]:
    """Hamiltonian tour minimizing the largest turning angle (exact order)."""
    pts = _points(P)
    n = len(pts)
    _check_size(n, cap, 3)
    table = _turn_table(pts)
    best_key, best = None, None
    for order in _circular_orders(n):
        worst = max(table[order[i - 1], order[i], order[(i + 1) % n]] for i in range(n))
        if best_key is None or worst < best_key:
            best_key, best = worst, order
    return Tour(tuple(pts[i] for i in best)), best_key


def brute_minsum_turn_tour(P, cap: Optional[int] = 9, dps: int = MINSUM_DPS):
    """Hamiltonian tour minimizing total turning; returns ``(tour, sum, err)``.

    Sums are accumulated with ``dps`` significant digits; ``err`` bounds the
    accumulated rounding, and orders whose sums differ by less than it are
    treated as tied (the first one enumerated is kept).
    """
    pts = _points(P)
    n = len(pts)
    _check_size(n, cap, 3)
    with mpmath.workdps(dps):
        table = {k: v.mp_radians(dps) for k, v in _turn_table(pts).items()}
        err = mpmath.mpf(10) ** (-(dps - 5)) * n
        best_sum, best = None, None
        for order in _circular_orders(n):
            s = mpmath.fsum(table[order[i - 1], order[i], order[(i + 1) % n]] for i in range(n))
            if best_sum is None or s < best_sum - err:
                best_sum, best = s, order
    return Tour(tuple(pts[i] for i in best)), best_sum, err


def _segment_masks(pts: list[Point]) -> list[list[int]]:
    n = len(pts)
    masks = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m = 0
            for k in range(n):
                if on_segment(pts[k], pts[i], pts[j]):
                    m |= 1 << k
            masks[i][j] = masks[j][i] = m
    return masks


def brute_minlink_spanning_tour(P, cap: Optional[int] = 12,
                                node_cap: Optional[int] = None) -> tuple[Tour, int, bool]:
    """Minimum-link spanning tour; returns ``(tour, links, optimal)``.

    Searches closed sequences of distinct points of ``P`` whose segments
    cover ``P``, shortest first.  Dropping a vertex with zero turn keeps both
    coverage and link count, so the shortest covering sequence has no such
    vertex and its length is the minimum number of links.  On hitting
    ``node_cap`` the best tour found so far is returned with
    ``optimal=False``.
    """
    pts = _points(P)
    n = len(pts)
    _check_size(n, cap, 2)
    full = (1 << n) - 1
    seg = _segment_masks(pts)
    max_cover = max((m.bit_count() for row in seg for m in row), default=1)
    # the input order is a valid Hamiltonian (hence spanning) incumbent
    incumbent = Tour(tuple(pts))
    inc_links = incumbent.links
    nodes = 0

    def search(length: int) -> Optional[tuple[int, ...]]:
        nonlocal nodes
        seq: list[int] = []

        def rec(covered: int, used: int) -> Optional[tuple[int, ...]]:
            nonlocal nodes
            nodes += 1
            if node_cap is not None and nodes > node_cap:
                raise CapExceededError
            k = len(seq)
            if k == length:
                if length >= 3 and seq[1] > seq[-1]:
                    return None
                if covered | seg[seq[-1]][seq[0]] == full:
                    return tuple(seq)
                return None
            # the remaining length - k + 1 segments cover at most max_cover each
            if (full & ~covered).bit_count() > (length - k + 1) * max_cover:
                return None
            first = seq[0]
            for v in range(first + 1, n):
                if used >> v & 1:
                    continue
                seq.append(v)
                found = rec(covered | seg[seq[-2]][v], used | 1 << v)
                seq.pop()
                if found:
                    return found
            return None

        for first in range(n):
            seq.append(first)
            found = rec(1 << first, 1 << first)
            seq.pop()
            if found:
                return found
        return None

    try:
        for length in range(2, inc_links):
            found = search(length)
            if found:
                tour = Tour(tuple(pts[i] for i in found))
                return tour, tour.links, True
    except CapExceededError:
        return incumbent, inc_links, False
    return incumbent, inc_links, True


def validate_covering_tour(chain: Tour, P) -> dict:
    pts = _points(P)
    return {"links": chain.links, "covers_all": chain.covers(pts)}


def is_obtuse(t: Tour) -> bool:
    return all(x.at_most_right_angle() for x in t.turns())
