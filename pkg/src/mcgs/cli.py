"""Command-line front end: decide, simplify, generate, render.

Exit codes: 0 decided true / success, 1 decided false, 2 input error,
3 alpha cap exceeded, 4 infeasible.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import generators as gen
from .frechet import Polyline, decide_frechet
from .freespace import compute_slices, decide_graph_distance_tree_to_graph, decide_traversal_distance, slice_alpha
from .graph import GraphError, ImmersedGraph, RootedTree, as_rooted, load_graph, save_graph
from .leaf_restricted import simplify_leaf_restricted
from .oracles import (
    OracleCapExceeded,
    brute_force_dominating_set,
    brute_force_max2sat,
    brute_force_min_simplification,
    subset_sum,
)
from .render import write_svg
from .result import AlphaCapExceeded, Infeasible
from .vertex_restricted import simplify_vertex_restricted

EXIT_TRUE, EXIT_FALSE, EXIT_INPUT, EXIT_RESOURCE, EXIT_INFEASIBLE = 0, 1, 2, 3, 4


class InputError(ValueError):
    pass


def _emit(report: dict) -> None:
    print(json.dumps(report, indent=2, sort_keys=True, default=_json_default))


def _json_default(value):
    if isinstance(value, (set, frozenset, tuple)):
        return list(value)
    return str(value)


def _clean(value):
    """JSON has no infinity: map non-finite floats to None."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def graph_as_polyline(g: ImmersedGraph) -> Polyline:
    """Vertices of a path graph in walking order, starting at the root if rooted, else at the smaller end."""
    if len(g.points) == 1:
        return Polyline(list(g.points.values()))
    if not g.is_tree() or any(g.degree(v) > 2 for v in g.points):
        raise InputError("the frechet distance needs both inputs to be paths")
    ends = sorted(v for v in g.points if g.degree(v) == 1)
    start = g.root if isinstance(g, RootedTree) and g.root in ends else ends[0]
    order, prev, cur = [start], None, start
    while True:
        nxt = [w for w in g.adj[cur] if w != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        order.append(cur)
    return Polyline([g.points[v] for v in order])


def _int_list(text: Optional[str]) -> Optional[list[int]]:
    if text is None:
        return None
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


# ---------------------------------------------------------------------------
# decide


def cmd_decide(args) -> int:
    A, B = load_graph(args.a), load_graph(args.b)
    if args.direction == "ba":
        A, B = B, A
    started = time.perf_counter()
    stats: dict = {}
    if args.distance == "frechet":
        decision = decide_frechet(graph_as_polyline(A), graph_as_polyline(B), args.delta, args.mode)
    elif args.distance == "traversal":
        if args.mode != "strong":
            raise InputError("the traversal distance has no weak mode")
        decision = decide_traversal_distance(A, B, args.delta)
    else:
        try:
            T = as_rooted(A)
        except GraphError as exc:
            raise InputError(f"graphdist needs a tree source: {exc}") from None
        decision = decide_graph_distance_tree_to_graph(T, B, args.delta, args.mode)
        stats["alpha"] = slice_alpha(compute_slices(T, B, args.delta))
    stats["seconds"] = time.perf_counter() - started
    _emit({"decision": bool(decision), "delta": args.delta, "distance": args.distance, "mode": args.mode, "stats": stats})
    return EXIT_TRUE if decision else EXIT_FALSE


# ---------------------------------------------------------------------------
# simplify


def _leaf_set(T: RootedTree, given: Optional[list[int]]) -> list[int]:
    if given is not None:
        return given
    if T.declared_leaves is not None:
        return list(T.declared_leaves)
    if isinstance(T.meta.get("leaves"), list):
        return list(T.meta["leaves"])
    return list(T.leaves)


def cmd_simplify(args) -> int:
    g = load_graph(args.input)
    try:
        T = as_rooted(g, args.root)
    except GraphError as exc:
        raise InputError(str(exc)) from None
    if args.variant == "vertex":
        result = simplify_vertex_restricted(
            T, args.delta, args.mode, alpha_cap=args.alpha_cap, paper_literal=args.paper_literal
        )
        leaves = None
    else:
        leaves = _leaf_set(T, _int_list(args.leaves))
        if args.alpha_cap is not None:
            alpha = slice_alpha(compute_slices(T, T, args.delta))
            if alpha > args.alpha_cap:
                raise AlphaCapExceeded(alpha, args.alpha_cap)
        result = simplify_leaf_restricted(T, leaves, args.delta, args.mode)
    report = {"variant": args.variant, **result.report()}
    report["wallTime"] = report.pop("seconds", None)
    report["verified"] = True
    if args.verify_oracle:
        oracle = brute_force_min_simplification(T, args.delta, args.mode, args.variant, leaves)
        report["oracleVertexCount"] = oracle.vertex_count
        report["oracleAgrees"] = oracle.vertex_count == result.vertex_count
    save_graph(result.tree, args.output)
    _emit(_clean(report))
    if args.verify_oracle and not report["oracleAgrees"]:
        return EXIT_FALSE
    return EXIT_TRUE


# ---------------------------------------------------------------------------
# generate


def _random_points(n: int, side: float, seed: int) -> list[tuple[float, float]]:
    rng = random.Random(seed)
    return [(round(rng.uniform(0, side), 3), round(rng.uniform(0, side), 3)) for _ in range(n)]


def _points_arg(args) -> list:
    if args.points:
        try:
            data = json.loads(Path(args.points).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read points: {exc}") from None
        if not isinstance(data, list) or not all(isinstance(p, list) and len(p) == 2 for p in data):
            raise InputError("points file must hold a JSON array of [x, y] pairs")
        return data
    if args.n is None:
        raise InputError("give --points FILE or --n N (with --seed)")
    return _random_points(args.n, args.side, args.seed)


def _parse_clauses(text: str) -> list[list[int]]:
    try:
        return [[int(x) for x in c.split(",") if x.strip()] for c in text.split(";") if c.strip()]
    except ValueError:
        raise InputError(f"clauses look like '1,-2;2,3', got {text!r}") from None


def cmd_generate(args) -> int:
    witness = None
    if args.kind in ("mdsudg", "mdsudg-star"):
        P = _points_arg(args)
        if args.kind == "mdsudg":
            inst = gen.gen_mdsudg_traversal_instance(P, {"pointZigzags": args.point_zigzags})
        else:
            inst = gen.gen_mdsudg_leaf_instance(P)
        if args.witness:
            k, S = brute_force_dominating_set(P)
            make = gen.mdsudg_traversal_witness if args.kind == "mdsudg" else gen.mdsudg_leaf_witness
            witness = make(inst, S)
            inst.witness_hint = {"dominatingSet": list(S), "size": k}
    elif args.kind == "max2sat":
        if args.cnf3:
            F = _parse_clauses(args.cnf3)
            F2, target = gen.transform_3sat_to_bipartite_max2sat(F)
        else:
            F = _parse_clauses(args.clauses)
            nv = args.num_vars or max((abs(l) for c in F for l in c), default=0)
            F2, target = gen.Cnf2(nv, F), None
        inst = gen.gen_max2sat_instance(F2)
        if target is not None:
            inst.meta["target"] = target
        if args.witness:
            if F2.num_vars > 20:
                raise InputError("witness search is capped at 20 variables")
            best, bits = brute_force_max2sat(F2.num_vars, F2.clauses)
            witness = gen.max2sat_witness(inst, bits)
            inst.witness_hint = {"assignment": list(bits), "satisfied": best}
    else:
        A = _int_list(args.A)
        if not A or args.B is None:
            raise InputError("subsetsum needs --A and --B")
        inst = gen.gen_subset_sum_instance(A, args.B, args.shape)
        if args.witness:
            subset = _subset_for(A, args.B)
            if subset is None:
                raise InputError(f"no subset of {A} sums to {args.B}")
            witness = gen.subset_sum_witness(inst, subset)
            inst.witness_hint = {"subset": subset}
    gen.save_instance(inst, args.output)
    if witness is not None:
        save_graph(witness, args.witness)
    _emit(_clean({"kind": args.kind, "output": args.output, "witness": args.witness, "vertices": len(inst.graph.points),
                  "edges": inst.graph.num_edges(), "delta": inst.delta}))
    return EXIT_TRUE


def _subset_for(A: Sequence[int], B: int) -> Optional[list[int]]:
    """Indices of one subset of A with sum B (lexicographically first by index mask)."""
    if not subset_sum(A, B):
        return None
    for mask in range(1 << len(A)):
        chosen = [i for i in range(len(A)) if mask >> i & 1]
        if sum(A[i] for i in chosen) == B:
            return chosen
    return None


# ---------------------------------------------------------------------------
# render


def cmd_render(args) -> int:
    g = load_graph(args.input)
    overlay = load_graph(args.overlay) if args.overlay else None
    if args.show_slices and args.delta is None:
        raise InputError("--show-slices needs --delta")
    write_svg(args.output, g, overlay=overlay, delta=args.delta, show_slices=args.show_slices)
    return EXIT_TRUE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mcgs", description="Min-complexity graph simplification toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", help="decide a directed distance at a threshold")
    d.add_argument("--distance", choices=("frechet", "traversal", "graphdist"), required=True)
    d.add_argument("--mode", choices=("strong", "weak"), default="strong")
    d.add_argument("--delta", type=float, required=True)
    d.add_argument("--direction", choices=("ab", "ba"), default="ab")
    d.add_argument("a")
    d.add_argument("b")
    d.set_defaults(run=cmd_decide)

    s = sub.add_parser("simplify", help="minimum tree simplification")
    s.add_argument("--variant", choices=("vertex", "leaf"), default="vertex")
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--mode", choices=("strong", "weak"), default="strong")
    s.add_argument("--leaves")
    s.add_argument("--root", type=int)
    s.add_argument("--alpha-cap", type=int)
    s.add_argument("--paper-literal", action="store_true")
    s.add_argument("--verify-oracle", action="store_true")
    s.add_argument("input")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(run=cmd_simplify)

    g = sub.add_parser("generate", help="hardness gadget instances")
    g.add_argument("kind", choices=("mdsudg", "mdsudg-star", "max2sat", "subsetsum"))
    g.add_argument("--points", help="JSON file with [[x, y], ...]")
    g.add_argument("--n", type=int)
    g.add_argument("--side", type=float, default=2.5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--point-zigzags", action="store_true")
    g.add_argument("--clauses", default="", help="2-CNF as '1,-2;2,3'")
    g.add_argument("--num-vars", type=int)
    g.add_argument("--cnf3", help="3-CNF routed through the bipartite transform")
    g.add_argument("--A")
    g.add_argument("--B", type=int)
    g.add_argument("--shape", choices=gen.SHAPES, default="tree")
    g.add_argument("--witness", help="also write the canonical witness here")
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(run=cmd_generate)

    r = sub.add_parser("render", help="SVG figure")
    r.add_argument("input")
    r.add_argument("--overlay")
    r.add_argument("--show-slices", action="store_true")
    r.add_argument("--delta", type=float)
    r.add_argument("-o", "--output", required=True)
    r.set_defaults(run=cmd_render)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_TRUE
    try:
        return args.run(args)
    except AlphaCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InputError, GraphError, OracleCapExceeded, gen.LayoutError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
