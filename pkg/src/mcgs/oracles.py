"""Brute-force references, independent of the dynamic programs they certify."""

from __future__ import annotations

import json
from itertools import combinations, product
from pathlib import Path
from typing import Optional, Sequence

import networkx as nx
import numpy as np
from networkx.utils import UnionFind
from scipy import ndimage

from .frechet import Polyline, check_mode, decide_frechet
from .freespace import decide_graph_distance_tree_to_graph, decide_traversal_distance
from .geom import Point, Segment, ball_segment_intersection, dist, resolve_eps
from .graph import ImmersedGraph, RootedTree, check_leaf_set, graph_to_dict, mapping_subtree
from .result import Infeasible, SimplificationResult, subtree_of

HARD_CAP = 8


class OracleCapExceeded(ValueError):
    pass


# ---------------------------------------------------------------------------
# minimum simplification by enumeration


def spanning_trees(vertices: Sequence[int]):
    """All straight-line spanning trees on the given ids, edges as sorted (u, v) lists, in lexicographic order."""
    vertices = sorted(vertices)
    if len(vertices) == 1:
        yield []
        return
    pairs = list(combinations(vertices, 2))
    for edges in combinations(pairs, len(vertices) - 1):
        uf = UnionFind(vertices)
        for a, b in edges:
            if uf[a] == uf[b]:
                break
            uf.union(a, b)
        else:
            yield list(edges)


def brute_force_min_simplification(
    T: RootedTree,
    delta: float,
    mode: str = "strong",
    variant: str = "vertex",
    leaves: Optional[Sequence[int]] = None,
    *,
    pin_root: bool = False,
    max_n: int = 6,
) -> SimplificationResult:
    """Smallest T' over subsets of V(T) and all spanning trees on them.

    variant "vertex": T must map into T'. variant "leaf": T' maps onto the mapping subtree
    of `leaves`, with those leaves as its exact degree-1 vertices (see leaf_restricted).
    Ties go to the lexicographically smallest (vertex set, edge list).
    """
    check_mode(mode)
    if variant not in ("vertex", "leaf"):
        raise ValueError("variant must be 'vertex' or 'leaf'")
    cap = min(max_n, HARD_CAP)
    n = len(T.points)
    if n > cap:
        raise OracleCapExceeded(f"{n} vertices exceeds the oracle cap {cap}")
    if variant == "vertex":
        for size in range(1, n + 1):
            for S in combinations(sorted(T.points), size):
                for edges in spanning_trees(S):
                    cand = ImmersedGraph({v: T.points[v] for v in S}, edges)
                    if decide_graph_distance_tree_to_graph(T, cand, delta, mode):
                        tree = subtree_of(T, S, edges, S[0])
                        return SimplificationResult(tree, None, {}, {"oracle": True})
        raise AssertionError("T itself is always feasible")
    if leaves is None:
        raise ValueError("the leaf variant needs a leaf set")
    leaves = check_leaf_set(T, leaves)
    M = mapping_subtree(T, leaves)
    L = set(leaves)
    eps = resolve_eps(None)
    root_branches = len(M.children[T.root]) >= 2 and not pin_root
    others = [v for v in sorted(T.points) if v not in L]
    for extra in range(len(others) + 1):
        best = None
        for X in combinations(others, extra):
            S = sorted(L | set(X))
            for edges in spanning_trees(S):
                deg = {v: 0 for v in S}
                for a, b in edges:
                    deg[a] += 1
                    deg[b] += 1
                if len(S) > 1 and any(deg[v] != 1 for v in L):
                    continue
                ends = {v for v in S if deg[v] <= 1}
                pins = {v: v for v in L}
                if root_branches:
                    if ends != L:
                        continue
                    cand = RootedTree({v: T.points[v] for v in S}, edges, leaves[0])
                    if decide_graph_distance_tree_to_graph(cand, M, delta, mode, pins=pins):
                        best = (S, edges, leaves[0])
                        break
                    continue
                for rho in S:
                    if rho in L or dist(T.points[rho], T.points[T.root]) > delta + eps:
                        continue
                    if pin_root and rho != T.root:
                        continue
                    if not ends <= L | {rho}:
                        continue
                    cand = RootedTree({v: T.points[v] for v in S}, edges, rho)
                    if decide_graph_distance_tree_to_graph(cand, M, delta, mode, pins={**pins, rho: T.root}):
                        best = (S, edges, rho)
                        break
                if best:
                    break
            if best:
                break
        if best:
            S, edges, root = best
            return SimplificationResult(subtree_of(T, S, edges, root), None, {}, {"oracle": True})
    raise Infeasible("no leaf-pinned tree maps onto T within delta")


# ---------------------------------------------------------------------------
# graph distance by explicit images and paths


def _image_candidates(p: Point, H: ImmersedGraph, delta: float, eps: float) -> list:
    """Graph vertices within delta, plus the midpoint of every disk-edge intersection."""
    out = [("v", w, H.points[w]) for w in sorted(H.points) if dist(p, H.points[w]) <= delta + eps]
    for k in range(H.num_edges()):
        iv = ball_segment_intersection(p, delta, H.edge_segment(k), eps)
        if iv is not None:
            out.append(("e", k, H.edge_segment(k).at(0.5 * (iv.lo + iv.hi))))
    return out


def _image_paths(a, b, H: ImmersedGraph, G: nx.Graph):
    """Polylines of simple paths of H between two image candidates."""
    if a[0] == "e" and b[0] == "e" and a[1] == b[1]:
        yield Polyline([a[2], b[2]])
    starts = [a[1]] if a[0] == "v" else list(H.edges[a[1]])
    ends = [b[1]] if b[0] == "v" else list(H.edges[b[1]])
    for s in starts:
        for t in ends:
            paths = [[s]] if s == t else nx.all_simple_paths(G, s, t)
            for path in paths:
                if a[0] == "e" and len(path) > 1 and path[1] in H.edges[a[1]]:
                    continue
                if b[0] == "e" and len(path) > 1 and path[-2] in H.edges[b[1]]:
                    continue
                pts = ([a[2]] if a[0] == "e" else []) + [H.points[v] for v in path] + ([b[2]] if b[0] == "e" else [])
                yield Polyline(pts)


def graph_distance_by_paths(
    T: RootedTree, H: ImmersedGraph, delta: float, mode: str = "strong", pins: Optional[dict] = None
) -> bool:
    """Independent check of the tree-to-graph decision: try every image candidate and every
    simple path, testing each edge with decide_frechet. Tiny inputs only."""
    check_mode(mode)
    eps = resolve_eps(None)
    pins = pins or {}
    G = nx.Graph()
    G.add_nodes_from(H.points)
    G.add_edges_from(H.edges)
    cands = {}
    for v, p in T.points.items():
        if v in pins:
            w = pins[v]
            cands[v] = [("v", w, H.points[w])] if dist(p, H.points[w]) <= delta + eps else []
        else:
            cands[v] = _image_candidates(p, H, delta, eps)
    feasible: dict = {}
    for u in T.postorder():
        keep = []
        for a in cands[u]:
            ok = True
            for v in T.children[u]:
                seg = Polyline([T.points[u], T.points[v]])
                if not any(decide_frechet(seg, path, delta, mode) for b in feasible[v] for path in _image_paths(a, b, H, G)):
                    ok = False
                    break
            if ok:
                keep.append(a)
        feasible[u] = keep
    return bool(feasible[T.root])


# ---------------------------------------------------------------------------
# combinatorial oracles


def brute_force_dominating_set(points: Sequence, radius: float = 1.0) -> tuple[int, tuple]:
    """Minimum dominating set of the unit disk graph (closed neighbourhoods within radius)."""
    pts = [Point(float(p[0]), float(p[1])) for p in points]
    n = len(pts)
    if n > 15:
        raise OracleCapExceeded("dominating set oracle is capped at 15 points")
    if n == 0:
        return 0, ()
    eps = resolve_eps(None)
    covers = [sum(1 << j for j in range(n) if dist(pts[i], pts[j]) <= radius + eps) for i in range(n)]
    full = (1 << n) - 1
    for k in range(1, n + 1):
        for S in combinations(range(n), k):
            got = 0
            for i in S:
                got |= covers[i]
            if got == full:
                return k, S
    raise AssertionError("the whole set always dominates")


def count_satisfied(clauses: Sequence[Sequence[int]], assignment: Sequence[bool]) -> int:
    """Clauses use 1-based signed variable indices; assignment[i] is the value of variable i+1."""
    return sum(any((lit > 0) == assignment[abs(lit) - 1] for lit in clause) for clause in clauses)


def brute_force_max2sat(num_vars: int, clauses: Sequence[Sequence[int]]) -> tuple[int, tuple]:
    if num_vars > 20:
        raise OracleCapExceeded("max-2sat oracle is capped at 20 variables")
    best = (-1, ())
    for bits in product((False, True), repeat=num_vars):
        c = count_satisfied(clauses, bits)
        if c > best[0]:
            best = (c, bits)
    return best


def subset_sum(A: Sequence[int], B: int) -> bool:
    if any(a <= 0 for a in A):
        raise ValueError("elements must be positive")
    if sum(A) > 10**6:
        raise OracleCapExceeded("sum of elements exceeds 10^6")
    if B < 0:
        return False
    reach = 1
    for a in A:
        reach |= reach << a
    return bool((reach >> B) & 1)


def min_traversal_reduction_tree(inst, max_targets: Optional[int] = None) -> tuple[int, RootedTree]:
    """Fewest-edge simplification of a dominating-set traversal instance within its delta.

    Candidates keep the n hub-to-translate links and add links to a subset of the original
    points, each hanging from the hub, a translate, or an earlier target. Smallest subsets first.
    """
    n = inst.meta["n"]
    hub = inst.meta["ids"]["hub"]
    g = inst.graph
    translated = list(range(n, 2 * n))
    base = [(hub, t) for t in translated]
    top = n if max_targets is None else min(n, max_targets)
    for size in range(top + 1):
        for S in combinations(range(n), size):
            options = [[hub] + translated + list(S[:j]) for j in range(size)]
            for parents in product(*options):
                edges = base + [(parents[j], S[j]) for j in range(size)]
                V = [hub] + translated + list(S)
                cand = RootedTree({v: g.points[v] for v in V}, edges, hub)
                if decide_traversal_distance(g, cand, inst.delta):
                    return n + size, cand
    raise Infeasible("no candidate within the searched family")


def _star_maps_leaf_to_leaf(inst, cand: RootedTree, distance: str) -> bool:
    """Each spoke (w, p) must reach a leaf of cand within delta, with the hub kept on itself."""
    hub = inst.meta["ids"]["hub"]
    g = inst.graph
    eps = resolve_eps(None)
    ends = [v for v in cand.points if v != hub and cand.degree(v) == 1]
    for p in inst.meta["ids"]["points"]:
        spoke = RootedTree({hub: g.points[hub], p: g.points[p]}, [(hub, p)], hub)
        ok = False
        for s in ends:
            if dist(g.points[p], cand.points[s]) > inst.delta + eps:
                continue
            if distance == "graph":
                ok = decide_graph_distance_tree_to_graph(spoke, cand, inst.delta, pins={hub: hub, p: s})
            else:
                path = nx.shortest_path(nx.Graph(cand.edges), hub, s)
                ok = decide_frechet(Polyline([g.points[hub], g.points[p]]), Polyline([cand.points[v] for v in path]), inst.delta)
            if ok:
                break
        if not ok:
            return False
    return True


def min_leaf_star_simplification(inst, distance: str = "graph", leaf_to_leaf: bool = True) -> tuple[int, RootedTree]:
    """Fewest-vertex tree T' on the hub plus original points, with degree-1 vertices among the points
    and the star within delta of T' (graph or traversal distance, star to T').

    With leaf_to_leaf every point of the star must be matched to a leaf of T' (the hub to itself).
    Without it a point may land anywhere on T', which lets a long spoke cover every point
    in a narrow strip around it.
    """
    if distance not in ("graph", "traversal"):
        raise ValueError("distance must be 'graph' or 'traversal'")
    n = inst.meta["n"]
    hub = inst.meta["ids"]["hub"]
    g = inst.graph
    if n > HARD_CAP:
        raise OracleCapExceeded(f"{n} points exceeds the oracle cap {HARD_CAP}")
    for size in range(1, n + 1):
        for S in combinations(range(n), size):
            V = [hub] + list(S)
            for edges in spanning_trees(V):
                deg = {v: 0 for v in V}
                for a, b in edges:
                    deg[a] += 1
                    deg[b] += 1
                if len(V) > 2 and deg[hub] == 1:
                    continue
                cand = RootedTree({v: g.points[v] for v in V}, edges, hub)
                if leaf_to_leaf:
                    ok = _star_maps_leaf_to_leaf(inst, cand, distance)
                elif distance == "graph":
                    ok = decide_graph_distance_tree_to_graph(g, cand, inst.delta)
                else:
                    ok = decide_traversal_distance(g, cand, inst.delta)
                if ok:
                    return size + 1, cand
    raise Infeasible("no leaf-restricted tree found")


# ---------------------------------------------------------------------------
# sampled Fréchet


def sample_polyline(P, pitch: float) -> np.ndarray:
    """Points along P at spacing at most pitch, always including every vertex."""
    P = Polyline(P)
    out = [np.array(P[0], dtype=float)]
    for s in P.segments():
        k = max(1, int(np.ceil(s.length / pitch)))
        ts = np.arange(1, k + 1) / k
        a, b = np.array(s.a, dtype=float), np.array(s.b, dtype=float)
        out.extend(a + np.outer(ts, b - a))
    return np.vstack(out)


def _distance_matrix(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.hypot(A[:, None, 0] - B[None, :, 0], A[:, None, 1] - B[None, :, 1])


def discrete_frechet(P, Q, pitch: float = 0.01) -> float:
    """Discrete Fréchet distance of densely sampled curves, one anti-diagonal at a time."""
    D = _distance_matrix(sample_polyline(P, pitch), sample_polyline(Q, pitch))
    n, m = D.shape
    C = np.full((n, m), np.inf)
    C[0, 0] = D[0, 0]
    for d in range(1, n + m - 1):
        i = np.arange(max(0, d - m + 1), min(n, d + 1))
        j = d - i
        prev = np.full(i.shape, np.inf)
        up = i > 0
        prev[up] = np.minimum(prev[up], C[i[up] - 1, j[up]])
        left = j > 0
        prev[left] = np.minimum(prev[left], C[i[left], j[left] - 1])
        diag = up & left
        prev[diag] = np.minimum(prev[diag], C[i[diag] - 1, j[diag] - 1])
        C[i, j] = np.maximum(D[i, j], prev)
    return float(C[-1, -1])


def discrete_weak_frechet(P, Q, pitch: float = 0.01) -> float:
    """Smallest threshold at which the sampled grid joins both corners (any direction allowed)."""
    D = _distance_matrix(sample_polyline(P, pitch), sample_polyline(Q, pitch))
    values = np.unique(D)
    lo = max(D[0, 0], D[-1, -1])
    values = values[values >= lo]
    a, b = 0, len(values) - 1
    while a < b:
        mid = (a + b) // 2
        labels, _ = ndimage.label(D <= values[mid], structure=np.ones((3, 3)))
        if labels[0, 0] and labels[0, 0] == labels[-1, -1]:
            b = mid
        else:
            a = mid + 1
    return float(values[a])


# ---------------------------------------------------------------------------
# fixtures


def dump_counterexample(path, graph: ImmersedGraph, params: dict, expected, actual) -> None:
    """Write a reproducible JSON fixture for a disagreement."""
    data = graph_to_dict(graph)
    data["meta"] = {**data.get("meta", {}), "params": params, "expected": expected, "actual": actual}
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
