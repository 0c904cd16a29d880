"""Bitmask set-system solvers shared by the geometric cover problems.

Candidates are given as ``(key, mask)`` pairs: ``mask`` is an int whose bit
``e`` is set when the candidate covers element ``e``; ``key`` is the
tie-break order (smaller wins).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np


class CapExceeded(RuntimeError):
    """Raised internally when a search exceeds its node budget."""


@dataclass
class SearchResult:
    chosen: list[int]
    value: int
    optimal: bool
    nodes: int


def popcount(x: int) -> int:
    return x.bit_count()


def greedy(masks: Sequence[int], universe: int,
           key: Callable[[int], Any] = lambda i: i,
           limit: int | None = None) -> list[int]:
    """Repeatedly take the candidate covering the most uncovered elements.

    Ties go to the candidate with the smallest ``key(i)``.  Keys are only
    evaluated for candidates that actually tie at the current maximum.
    Stops when ``universe`` is covered, nothing gains, or after ``limit``
    picks.
    """
    gains = np.fromiter(((m & universe).bit_count() for m in masks), dtype=np.int64,
                        count=len(masks))
    order = np.argsort(gains, kind="stable")
    sorted_gains = gains[order]
    cuts = np.flatnonzero(np.diff(sorted_gains)) + 1
    buckets: dict[int, list[int]] = {}
    for part in np.split(order, cuts):
        if len(part) and gains[part[0]]:
            buckets[int(gains[part[0]])] = part.tolist()
    uncovered = universe
    chosen: list[int] = []
    while uncovered and buckets and (limit is None or len(chosen) < limit):
        top = max(buckets)
        stale = buckets.pop(top)
        current = []
        for i in stale:
            g = (masks[i] & uncovered).bit_count()
            if g == top:
                current.append(i)
            elif g:
                buckets.setdefault(g, []).append(i)
        if not current:
            continue
        best = min(current, key=key)
        chosen.append(best)
        uncovered &= ~masks[best]
        current.remove(best)
        if current:
            buckets[top] = current
    return chosen


def _options(e_bit: int, cand_of_e: Sequence[int], masks: Sequence[int],
             free: int) -> list[tuple[int, int]]:
    """Non-dominated candidates through element ``e``, best gain first."""
    restricted = {}
    for i in cand_of_e:
        r = masks[i] & free
        if r and r not in restricted:
            restricted[r] = i
    items = sorted(restricted.items(), key=lambda kv: (-popcount(kv[0]), kv[1]))
    kept: list[tuple[int, int]] = []
    for r, i in items:
        if any(r & k == r for k, _ in kept):
            continue
        kept.append((r, i))
    return [(i, r) for r, i in kept]


def _top_sum(masks: Sequence[int], free: int, count: int) -> int:
    if count <= 0:
        return 0
    gains = [g for g in (popcount(m & free) for m in masks) if g]
    return sum(heapq.nlargest(count, gains))


def exact_cover(masks: Sequence[int], universe: int, incumbent: Sequence[int],
                node_cap: int | None = None) -> SearchResult:
    """Minimum number of candidates covering ``universe`` (branch and bound).

    Branches on the lowest uncovered element; prunes with the sum of the
    largest remaining gains.  ``incumbent`` must be a feasible cover.
    """
    n_elem = universe.bit_length()
    by_elem: list[list[int]] = [[] for _ in range(n_elem)]
    for i, m in enumerate(masks):
        x = m & universe
        while x:
            low = x & -x
            by_elem[low.bit_length() - 1].append(i)
            x ^= low
    best = list(incumbent)
    nodes = 0
    chosen: list[int] = []

    def rec(covered: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if node_cap is not None and nodes > node_cap:
            raise CapExceeded
        free = universe & ~covered
        if not free:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        budget = len(best) - 1 - len(chosen)
        if budget <= 0 or _top_sum(masks, free, budget) < popcount(free):
            return
        low = free & -free
        for i, r in _options(low, by_elem[low.bit_length() - 1], masks, free):
            chosen.append(i)
            rec(covered | r)
            chosen.pop()

    try:
        rec(0)
    except CapExceeded:
        return SearchResult(best, len(best), False, nodes)
    return SearchResult(best, len(best), True, nodes)


def exact_max_coverage(masks: Sequence[int], universe: int, k: int,
                       incumbent: Sequence[int],
                       node_cap: int | None = None) -> SearchResult:
    """At most ``k`` candidates covering the most elements of ``universe``."""
    n_elem = universe.bit_length()
    by_elem: list[list[int]] = [[] for _ in range(n_elem)]
    for i, m in enumerate(masks):
        x = m & universe
        while x:
            low = x & -x
            by_elem[low.bit_length() - 1].append(i)
            x ^= low

    def value(sel):
        cov = 0
        for i in sel:
            cov |= masks[i]
        return popcount(cov & universe)

    best = list(incumbent)
    best_val = value(best)
    nodes = 0
    chosen: list[int] = []

    def rec(covered: int, excluded: int) -> None:
        nonlocal best, best_val, nodes
        nodes += 1
        if node_cap is not None and nodes > node_cap:
            raise CapExceeded
        cur = popcount(covered)
        if cur > best_val:
            best, best_val = list(chosen), cur
        free = universe & ~covered & ~excluded
        left = k - len(chosen)
        if not free or left == 0:
            return
        upper = cur + min(popcount(free), _top_sum(masks, free, left))
        if upper <= best_val:
            return
        low = free & -free
        for i, r in _options(low, by_elem[low.bit_length() - 1], masks, free):
            chosen.append(i)
            rec(covered | masks[i] & universe, excluded)
            chosen.pop()
        rec(covered, excluded | low)

    if k > 0:
        try:
            rec(0, 0)
        except CapExceeded:
            return SearchResult(best, best_val, False, nodes)
    return SearchResult(best, best_val, True, nodes)
