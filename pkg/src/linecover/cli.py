"""Command-line front end: ``linecover <gen|solve|verify|bench> <what> [flags]``.

Exit codes: 0 success, 2 invalid input, 3 cap exceeded, 4 verification failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import mpmath

from . import adversary, cover, gadget, lattice, minmax, spanning, svg, tours, triangle
from .geometry import GeometryError, Line, Point, TurnMeasure
from .instances import (CubicGraphInstance, LineSetInstance, PointSetInstance, SatInstance,
                        ValidationError, format_rational, load_instance, to_json)

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_VERIFY = 0, 2, 3, 4

_DEFAULTS = {
    "seed": 0, "cap": None, "out": None, "format": None, "svg": None, "inp": None,
    "N": "10", "kmin": 2, "kmax": 10, "k": None, "n": None, "count": 1, "graph": None,
    "embedding": "segments", "exact": False, "mu": minmax.DEFAULT_MU,
    "t_cap": minmax.DEFAULT_T_CAP, "lines_kmax": None,
}


class CapHit(Exception):
    pass


def _u64(s: str) -> int:
    v = int(s)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--seed", type=_u64, help="seed for all randomness (default 0)")
    p.add_argument("--cap", type=int, help="size cap for exact solvers and tour searches")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["json", "csv"], help="output format")
    p.add_argument("--svg", help="also write an SVG picture here")
    p.add_argument("--in", dest="inp", help="input instance file (JSON)")
    p.add_argument("--N", help="lattice size, or a comma list of sizes")
    p.add_argument("--kmin", type=int)
    p.add_argument("--kmax", type=int)
    p.add_argument("--k", type=int, help="G_k size, or line budget for maxcov")
    p.add_argument("--n", type=int, help="variables of a random SAT instance")
    p.add_argument("--count", type=int, help="number of random instances")
    p.add_argument("--graph", help="named test graph: " + ", ".join(spanning.standard_graphs()))
    p.add_argument("--embedding", choices=["segments", "lines"])
    p.add_argument("--exact", action="store_true", help="use the exact solver")
    p.add_argument("--mu", type=int)
    p.add_argument("--t-cap", dest="t_cap", type=int)
    p.add_argument("--lines-kmax", dest="lines_kmax", type=int)
    return p


COMMANDS = {
    "gen": ["adversary", "gadget", "triangle", "spanning", "minmax"],
    "solve": ["cover", "maxcov", "lines-by-points", "tour-minmax", "tour-minsum", "tour-minlink"],
    "verify": ["sat-lemmas", "greedy-ratio", "lattice", "spanning-reduction",
               "triangle-forward", "minmax-forward"],
    "bench": ["greedy-ratio"],
}


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="linecover", parents=[common],
                                     description="Line-cover constructions, solvers and checks.")
    groups = parser.add_subparsers(dest="group", required=True)
    for group, names in COMMANDS.items():
        gp = groups.add_parser(group, parents=[common])
        sub = gp.add_subparsers(dest="what", required=True)
        for name in names:
            sub.add_parser(name, parents=[common])
    return parser


# -- serialization -----------------------------------------------------------

def _plain(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, Point):
        return [format_rational(obj.x), format_rational(obj.y)]
    if isinstance(obj, Line):
        return [str(obj.a), str(obj.b), str(obj.c)]
    if isinstance(obj, TurnMeasure):
        return {"radians": mpmath.nstr(obj.mp_radians(), 20), "kind": obj.kind}
    if isinstance(obj, mpmath.mpf):
        return mpmath.nstr(obj, 20)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_plain(v) for v in obj)
    return str(obj)


def _csv_text(rows: list[dict]) -> str:
    buf = io.StringIO()
    cols: list[str] = []
    for r in rows:
        cols += [c for c in r if c not in cols]
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        flat = {}
        for c in cols:
            v = _plain(r.get(c))
            flat[c] = "" if v is None else (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v)
        w.writerow(flat)
    return buf.getvalue()


def _emit(args, payload: Any, rows: Optional[list[dict]] = None) -> None:
    fmt = args.format or ("csv" if args.out and args.out.endswith(".csv") else "json")
    if fmt == "csv":
        if rows is None:
            if isinstance(payload, dict) and not any(isinstance(v, (dict, list)) for v in payload.values()):
                rows = [payload]
            else:
                raise ValidationError("format", "this command only writes JSON")
        text = _csv_text(rows)
    else:
        text = json.dumps(_plain(payload), indent=1, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_svg(args, text: str) -> None:
    if args.svg:
        Path(args.svg).write_text(text)


# -- inputs ------------------------------------------------------------------

def _need_in(args, kind: str):
    if not args.inp:
        raise ValidationError("file-unreadable", "--in is required")
    return load_instance(args.inp, kind)


def _points_or_default(args, default):
    if args.inp:
        return list(load_instance(args.inp, "points").points)
    return default()


def _small_gadget_points(args):
    P, _ = gadget.build_gadget(gadget.THREE_CLAUSE_INSTANCE, args.seed)
    return list(P.points)


def _square():
    return [Point(Fraction(x), Fraction(y)) for x, y in ((0, 0), (1, 0), (0, 1), (1, 1))]


def _graphs(args) -> dict[str, CubicGraphInstance]:
    if args.inp:
        return {Path(args.inp).stem: load_instance(args.inp, "cubic-graph")}
    std = spanning.standard_graphs()
    if args.graph:
        if args.graph not in std:
            raise ValidationError("unknown-kind", f"unknown graph {args.graph!r}")
        return {args.graph: std[args.graph]}
    return std


# -- gen ---------------------------------------------------------------------

def gen_adversary(args) -> int:
    k = args.k if args.k is not None else 5
    g = adversary.build_gk(k)
    inst = adversary.embed_segments(g) if args.embedding == "segments" else adversary.embed_lines(g)
    _emit(args, to_json(inst))
    return EXIT_OK


def gen_gadget(args) -> int:
    if args.inp:
        sat = load_instance(args.inp, "sat")
    elif args.n:
        sat = gadget.random_sat_instance(args.n, args.seed)
    else:
        sat = gadget.THREE_CLAUSE_INSTANCE
    P, layout = gadget.build_gadget(sat, args.seed)
    inst = PointSetInstance(P.points, layout.to_annotations())
    _emit(args, to_json(inst))
    _write_svg(args, svg.tour_plot(inst.points))
    return EXIT_OK


def gen_triangle(args) -> int:
    tri = triangle.build_triangle_instance(_need_in(args, "points"), args.seed)
    inst = tri.to_point_set()
    _emit(args, to_json(inst))
    _write_svg(args, svg.tour_plot(inst.points))
    return EXIT_OK


def gen_spanning(args) -> int:
    if args.inp:
        G = load_instance(args.inp, "cubic-graph")
    else:
        G = spanning.standard_graphs()[args.graph or "k4"]
    inst = spanning.build_spanning_instance(G, args.seed).to_point_set()
    _emit(args, to_json(inst))
    _write_svg(args, svg.tour_plot(inst.points))
    return EXIT_OK


def gen_minmax(args) -> int:
    c = minmax.build_minmax_instance(_need_in(args, "points"), mu=args.mu, t_cap=args.t_cap)
    inst = c.to_point_set()
    _emit(args, to_json(inst))
    if args.out:
        sys.stderr.write(json.dumps(_plain(c.summary()), sort_keys=True) + "\n")
    return EXIT_OK


# -- solve -------------------------------------------------------------------

def _cover_result(sol) -> dict:
    return {"chosen": sol.chosen, "size": sol.size, "covered": len(sol.covered),
            "optimal": sol.optimal, "nodes": sol.info.get("nodes")}


def _guard(args, default: int) -> int:
    # --cap raises (or lowers) the exact solvers' size guard
    return args.cap if args.cap is not None else default


def _finish_cover(args, sol) -> int:
    _emit(args, _cover_result(sol))
    return EXIT_CAP if sol.optimal is False else EXIT_OK


def solve_cover(args) -> int:
    P = _need_in(args, "points")
    if args.exact:
        return _finish_cover(args, cover.exact_cover_points_by_lines(P, guard=_guard(args, cover.DEFAULT_POINT_GUARD)))
    return _finish_cover(args, cover.greedy_cover_points_by_lines(P))


def solve_maxcov(args) -> int:
    P = _need_in(args, "points")
    if args.k is None:
        raise ValidationError("integer-expected", "--k is required")
    if args.exact:
        return _finish_cover(args, cover.exact_max_coverage(P, args.k, guard=_guard(args, cover.DEFAULT_POINT_GUARD)))
    return _finish_cover(args, cover.greedy_max_coverage(P, args.k))


def solve_lines_by_points(args) -> int:
    L = _need_in(args, "lines")
    if args.exact:
        return _finish_cover(args, cover.exact_cover_lines_by_points(L, guard=_guard(args, cover.DEFAULT_LINE_GUARD)))
    return _finish_cover(args, cover.greedy_cover_lines_by_points(L))


def _tour_out(args, P, tour, extra: dict) -> int:
    out = {"tour": list(tour.vertices), "links": tour.links, **extra}
    _emit(args, out)
    _write_svg(args, svg.tour_plot(list(P.points), list(tour.vertices)))
    return EXIT_OK


def solve_tour_minmax(args) -> int:
    P = _need_in(args, "points")
    tour, worst = tours.brute_minmax_turn_tour(P, cap=args.cap or 9)
    return _tour_out(args, P, tour, {"max_turn": worst, "obtuse": tours.is_obtuse(tour)})


def solve_tour_minsum(args) -> int:
    P = _need_in(args, "points")
    tour, total, err = tours.brute_minsum_turn_tour(P, cap=args.cap or 9)
    return _tour_out(args, P, tour, {"sum_turn": total, "error_bound": err})


def solve_tour_minlink(args) -> int:
    P = _need_in(args, "points")
    tour, links, optimal = tours.brute_minlink_spanning_tour(P, cap=args.cap or 12)
    code = _tour_out(args, P, tour, {"optimal": optimal,
                                     **tours.validate_covering_tour(tour, P)})
    return code if optimal else EXIT_CAP


# -- verify ------------------------------------------------------------------

def verify_sat_lemmas(args) -> int:
    if args.inp:
        insts = [(load_instance(args.inp, "sat"), args.seed)]
    elif args.n:
        insts = [(gadget.random_sat_instance(args.n, args.seed + i), args.seed + i)
                 for i in range(args.count)]
    else:
        insts = [(gadget.THREE_CLAUSE_INSTANCE, args.seed)]
    reports = [gadget.verify_sat_lemmas(inst, seed) for inst, seed in insts]
    rows = [{"n": r["n"], "m": r["m"], "seed": r["seed"], "w_star": r["w_star"],
             "x_star": r["x_star"], "k_star": r["k_star"], "passed": r["passed"]} for r in reports]
    _emit(args, {"reports": reports, "passed": all(r["passed"] for r in reports)}, rows)
    return EXIT_OK if all(r["passed"] for r in reports) else EXIT_VERIFY


def _ratio_rows(args, lines_default: int) -> list[dict]:
    lk = args.lines_kmax if args.lines_kmax is not None else lines_default
    rows = adversary.greedy_ratio_experiment(args.kmin, args.kmax, lines_k_max=lk)
    for r in rows:
        r["bound_ok"] = adversary.ratio_meets_bound(r["ratio"], r["k"])
        r["passed"] = (r["greedy_segments"] == r["b_count"] and r["block_order_ok"]
                       and r["witness_ok"] and r["bound_ok"]
                       and r["simple_crossings_ok"] is not False
                       and (r["greedy_lines"] is None or r["greedy_lines"] >= r["b_count"]))
    return rows


def verify_greedy_ratio(args) -> int:
    rows = _ratio_rows(args, 20)
    _emit(args, {"rows": rows, "passed": all(r["passed"] for r in rows)}, rows)
    _write_svg(args, svg.ratio_plot(rows))
    return EXIT_OK if all(r["passed"] for r in rows) else EXIT_VERIFY


def bench_greedy_ratio(args) -> int:
    t0 = time.perf_counter()
    rows = _ratio_rows(args, 0)
    sys.stderr.write(f"greedy-ratio k={args.kmin}..{args.kmax}: {time.perf_counter() - t0:.2f}s\n")
    _emit(args, {"rows": rows}, rows)
    _write_svg(args, svg.ratio_plot(rows))
    return EXIT_OK if all(r["passed"] for r in rows) else EXIT_VERIFY


def verify_lattice(args) -> int:
    try:
        sizes = [int(s) for s in str(args.N).split(",")]
    except ValueError as exc:
        raise ValidationError("integer-expected", str(args.N)) from exc
    rows = [lattice.lattice_report_row(N) for N in sizes]
    ok = all(r["bound_ok"] for r in rows if r["N"] >= 10)
    _emit(args, {"rows": rows, "passed": ok}, rows)
    return EXIT_OK if ok else EXIT_VERIFY


def verify_spanning_reduction(args) -> int:
    brute_cap = args.cap or 13
    rows = []
    for name, G in _graphs(args).items():
        for e in G.edges:
            Ge = CubicGraphInstance(G.n, G.edges, e)
            inst = spanning.build_spanning_instance(Ge, args.seed)
            path = spanning.find_ham_path(inst)
            circ = spanning.find_ham_circuit_with_edge(Ge)
            row = {"graph": name, "edge": f"{e[0]}-{e[1]}", "points": len(inst.points),
                   "m_plus_2": G.m + 2, "path": path is not None, "circuit": circ is not None,
                   "agree": (path is None) == (circ is None), "tour_links": None,
                   "brute_links": None}
            if path is not None:
                row["tour_links"] = spanning.hampath_to_spanning_tour(path, inst).links
            if len(inst.points) <= brute_cap:
                _, links, optimal = tours.brute_minlink_spanning_tour(inst.points, cap=brute_cap)
                row["brute_links"] = links if optimal else None
            row["passed"] = (row["agree"]
                             and (path is None or row["tour_links"] == G.m + 2)
                             and (row["brute_links"] is None
                                  or (row["brute_links"] == G.m + 2) == (path is not None)))
            rows.append(row)
    ok = all(r["passed"] for r in rows)
    _emit(args, {"rows": rows, "passed": ok}, rows)
    return EXIT_OK if ok else EXIT_VERIFY


def verify_triangle_forward(args) -> int:
    P = _points_or_default(args, lambda: _small_gadget_points(args))
    tri = triangle.build_triangle_instance(P, args.seed)
    errs = triangle.check_triangle_instance(tri)
    sol = cover.exact_cover_points_by_lines(P, guard=_guard(args, cover.DEFAULT_POINT_GUARD))
    tour = triangle.lines_to_covering_tour(sol.chosen, tri)
    val = tours.validate_covering_tour(tour, tri.points)
    ok = not errs and val["covers_all"] and val["links"] == 3 * sol.size
    _emit(args, {"points": len(tri.points), "k": sol.size, "links": val["links"],
                 "covers_all": val["covers_all"], "invariant_failures": errs, "passed": ok})
    _write_svg(args, svg.tour_plot(tri.points, tour.vertices))
    return EXIT_OK if ok else EXIT_VERIFY


def verify_minmax_forward(args) -> int:
    P = _points_or_default(args, _square)
    c = minmax.build_minmax_instance(P, mu=args.mu, t_cap=args.t_cap)
    errs = minmax.check_curve_instance(c)
    sol = cover.exact_cover_points_by_lines(P, guard=_guard(args, cover.DEFAULT_POINT_GUARD))
    lines = [l for l in sol.chosen if sum(l.contains(p) for p in c.source) >= 2]
    order = minmax.minmax_tour_order(lines, c)
    worst, _ = minmax.order_max_turn(c, order)
    budget = minmax.turn_budget(c, len(lines))
    ok = (not errs and sorted(order) == list(range(len(c.grid)))
          and worst.cmp_radians(budget) <= 0)
    _emit(args, {**c.summary(), "k": len(lines), "max_turn": worst, "budget": budget,
                 "structure_failures": errs, "passed": ok})
    return EXIT_OK if ok else EXIT_VERIFY


HANDLERS = {
    ("gen", "adversary"): gen_adversary,
    ("gen", "gadget"): gen_gadget,
    ("gen", "triangle"): gen_triangle,
    ("gen", "spanning"): gen_spanning,
    ("gen", "minmax"): gen_minmax,
    ("solve", "cover"): solve_cover,
    ("solve", "maxcov"): solve_maxcov,
    ("solve", "lines-by-points"): solve_lines_by_points,
    ("solve", "tour-minmax"): solve_tour_minmax,
    ("solve", "tour-minsum"): solve_tour_minsum,
    ("solve", "tour-minlink"): solve_tour_minlink,
    ("verify", "sat-lemmas"): verify_sat_lemmas,
    ("verify", "greedy-ratio"): verify_greedy_ratio,
    ("verify", "lattice"): verify_lattice,
    ("verify", "spanning-reduction"): verify_spanning_reduction,
    ("verify", "triangle-forward"): verify_triangle_forward,
    ("verify", "minmax-forward"): verify_minmax_forward,
    ("bench", "greedy-ratio"): bench_greedy_ratio,
}


def _threads() -> int:
    # work is sequential; the variable is validated so scripts fail loudly
    raw = os.environ.get("LINECOVER_THREADS")
    if raw is None:
        return 1
    v = int(raw)
    if v < 1:
        raise ValueError("LINECOVER_THREADS must be a positive integer")
    return v


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    for k, v in _DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    try:
        _threads()
        return HANDLERS[(args.group, args.what)](args)
    except (cover.SizeGuardError, tours.CapExceededError, spanning.GuardExceeded) as exc:
        sys.stderr.write(f"cap exceeded: {exc}\n")
        return EXIT_CAP
    except (ValidationError, GeometryError, ValueError, OSError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
