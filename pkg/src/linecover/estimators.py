"""scikit-learn style wrappers around the cover solvers.

Inputs are exact: coordinates may be ints, Fractions or ``"p/q"`` strings,
and are never converted to floats.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import cover
from .geometry import Line, Point, on_line
from .instances import ValidationError, parse_rational

__all__ = ["check_points", "check_lines", "LineCover", "MaxCoverage", "PointStabber"]


def _rational(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, str):
        return parse_rational(v)
    raise ValidationError("rational-malformed", f"{v!r} is not exact (use ints, Fractions or 'p/q')")


def check_points(X, min_points: int = 1) -> list[Point]:
    """Validate an ``(n, 2)`` array-like of exact coordinates."""
    rows = list(X)
    pts = []
    for r in rows:
        r = list(r)
        if len(r) != 2:
            raise ValidationError("point-malformed", f"expected 2 coordinates, got {r!r}")
        pts.append(Point(_rational(r[0]), _rational(r[1])))
    if len(pts) < min_points:
        raise ValidationError("point-malformed", f"need at least {min_points} points")
    if len(set(pts)) != len(pts):
        raise ValidationError("duplicate-points", "points must be distinct")
    return pts


def check_lines(X, min_lines: int = 1) -> list[Line]:
    """Validate an ``(m, 3)`` array-like of integer coefficients ``a x + b y = c``."""
    out = []
    for r in X:
        r = list(r)
        if len(r) != 3:
            raise ValidationError("line-malformed", f"expected 3 coefficients, got {r!r}")
        q = [_rational(v) for v in r]
        if any(v.denominator != 1 for v in q):
            raise ValidationError("integer-expected", repr(r))
        if q[0] == 0 and q[1] == 0:
            raise ValidationError("degenerate-line", repr(r))
        out.append(Line.from_coeffs(*(int(v) for v in q)))
    if len(out) < min_lines:
        raise ValidationError("degenerate-line", f"need at least {min_lines} lines")
    if len(set(out)) != len(out):
        raise ValidationError("duplicate-lines", "lines must be distinct")
    return out


class _Fitted:
    def _check_fitted(self):
        if not hasattr(self, "chosen_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted")


class LineCover(_Fitted, TransformerMixin, BaseEstimator):
    """Cover a point set by lines.

    ``method`` is ``"greedy"`` or ``"exact"``.  After ``fit``: ``chosen_``
    (lines), ``n_lines_`` and ``optimal_`` (None for greedy).
    ``predict`` labels each point with the first chosen line through it
    (-1 if none); ``transform`` gives the point-by-line incidence matrix.
    """

    def __init__(self, method: str = "greedy", node_cap=None, guard=cover.DEFAULT_POINT_GUARD):
        self.method = method
        self.node_cap = node_cap
        self.guard = guard

    def fit(self, X, y=None):
        pts = check_points(X)
        if self.method == "greedy":
            sol = cover.greedy_cover_points_by_lines(pts)
        elif self.method == "exact":
            sol = cover.exact_cover_points_by_lines(pts, node_cap=self.node_cap, guard=self.guard)
        else:
            raise ValueError(f"unknown method {self.method!r}")
        self.chosen_ = list(sol.chosen)
        self.n_lines_ = sol.size
        self.optimal_ = sol.optimal
        return self

    def predict(self, X):
        self._check_fitted()
        pts = check_points(X)
        return np.array([next((j for j, l in enumerate(self.chosen_) if on_line(p, l)), -1)
                         for p in pts], dtype=np.int64)

    def transform(self, X):
        self._check_fitted()
        pts = check_points(X)
        return np.array([[on_line(p, l) for l in self.chosen_] for p in pts], dtype=bool)


class MaxCoverage(_Fitted, BaseEstimator):
    """Choose ``k`` lines covering as many points as possible."""

    def __init__(self, k: int = 1, method: str = "greedy", node_cap=None,
                 guard=cover.DEFAULT_POINT_GUARD):
        self.k = k
        self.method = method
        self.node_cap = node_cap
        self.guard = guard

    def fit(self, X, y=None):
        pts = check_points(X)
        if self.method == "greedy":
            sol = cover.greedy_max_coverage(pts, self.k)
        elif self.method == "exact":
            sol = cover.exact_max_coverage(pts, self.k, node_cap=self.node_cap, guard=self.guard)
        else:
            raise ValueError(f"unknown method {self.method!r}")
        self.chosen_ = list(sol.chosen)
        self.n_covered_ = len(sol.covered)
        self.optimal_ = sol.optimal
        return self

    def predict(self, X):
        """True for points on some chosen line."""
        self._check_fitted()
        return np.array([any(on_line(p, l) for l in self.chosen_) for p in check_points(X)])


class PointStabber(_Fitted, BaseEstimator):
    """Choose points so that every input line passes through one of them."""

    def __init__(self, method: str = "greedy", node_cap=None, guard=cover.DEFAULT_LINE_GUARD):
        self.method = method
        self.node_cap = node_cap
        self.guard = guard

    def fit(self, X, y=None):
        lines = check_lines(X)
        if self.method == "greedy":
            sol = cover.greedy_cover_lines_by_points(lines)
        elif self.method == "exact":
            sol = cover.exact_cover_lines_by_points(lines, node_cap=self.node_cap, guard=self.guard)
        else:
            raise ValueError(f"unknown method {self.method!r}")
        self.chosen_ = list(sol.chosen)
        self.n_points_ = sol.size
        self.optimal_ = sol.optimal
        return self

    def predict(self, X):
        """Index of the first chosen point on each line (-1 if none)."""
        self._check_fitted()
        return np.array([next((j for j, p in enumerate(self.chosen_) if on_line(p, l)), -1)
                         for l in check_lines(X)], dtype=np.int64)
