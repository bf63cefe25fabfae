"""Leaf-restricted simplification from an output tree T' onto the input tree T.

T' is a tree on a subset of V(T) whose degree-1 vertices are exactly the chosen leaves
(plus, when the root of T is not a branching point of the mapping subtree M_T, one
extra end that maps to the root). It must map into M_T edge by edge within (weak)
Fréchet distance delta, every chosen leaf onto itself, and its image must reach the
root of T. When the root of M_T branches, the image of any connected T' through all
the leaves already passes the root, so no extra vertex is needed.

Search: a Steiner-tree style DP over (vertex of T, anchor of its image on M_T, subset
of leaves below). Anchors are M_T vertices within delta or chords of M_T edges; any
point of a chord reaches the same things (convex cells), so this is exact except that
the DP may reuse one vertex of T in two branches. When the extracted optimum does
that, a label-setting search over used-vertex sets takes over.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .frechet import Polyline, check_mode, decide_frechet
from .freespace import Anchor, EdgeSurface, anchors_at, decide_graph_distance_tree_to_graph
from .geom import Point, dist, resolve_eps
from .graph import RootedTree, ancestor_tree, check_leaf_set, mapping_subtree
from .result import Infeasible, SimplificationResult, VerificationError, subtree_of

INF = math.inf


@dataclass
class _Problem:
    T: RootedTree
    M: RootedTree
    leaves: list
    delta: float
    mode: str
    eps: float
    states: list          # (vertex, anchor)
    state_of: dict        # (vertex, anchor index) -> state id
    anchors: dict         # vertex -> list[Anchor]
    preds: list           # state id -> list of state ids that may be its parent
    leaf_state: list      # leaf index -> state id


def _reach_pairs(surf: EdgeSurface, A: list, B: list) -> list[tuple[int, int]]:
    out = []
    for i, a in enumerate(A):
        reach = surf.earliest((w, t) for w, t, _ in surf.source_entries(a))
        for j, b in enumerate(B):
            if surf.same_edge(a, b):
                out.append((i, j))
            elif a.is_vertex and b.is_vertex and a.vertex == b.vertex:
                if surf.at_start(a.vertex) and surf.at_end(a.vertex):
                    out.append((i, j))
            elif any(w in reach and (surf.mode == "weak" or reach[w] <= surf.spines[w].hi + surf.eps)
                     for w, _ in surf.target_exits(b)):
                out.append((i, j))
    return out


def _build(T: RootedTree, leaves: list, delta: float, mode: str, eps: float) -> _Problem:
    M = mapping_subtree(T, leaves)
    leaf_set = set(leaves)
    anchors = {}
    for v, p in T.points.items():
        if v in leaf_set:
            anchors[v] = [Anchor(v, None)]
        else:
            found = anchors_at(p, M, delta, eps)
            if found:
                anchors[v] = found
    states, state_of = [], {}
    for v in sorted(anchors):
        for i, a in enumerate(anchors[v]):
            state_of[(v, i)] = len(states)
            states.append((v, a))
    preds: list = [[] for _ in states]
    verts = sorted(anchors)
    for x in range(len(verts)):
        w = verts[x]
        for y in range(x + 1, len(verts)):
            c = verts[y]
            if w in leaf_set and c in leaf_set:
                continue
            surf = EdgeSurface(T.segment(w, c), M, delta, mode, eps=eps)
            for i, j in _reach_pairs(surf, anchors[w], anchors[c]):
                sw, sc = state_of[(w, i)], state_of[(c, j)]
                # the reversed edge is valid for the same pair of anchors
                if w not in leaf_set:
                    preds[sc].append(sw)
                if c not in leaf_set:
                    preds[sw].append(sc)
    leaf_state = [state_of[(v, 0)] for v in leaves]
    return _Problem(T, M, leaves, delta, mode, eps, states, state_of, anchors, preds, leaf_state)


def _root_targets(prob: _Problem, pin_root: bool) -> tuple[str, list]:
    """How a full solution is closed off.

    ("leaf", [state ids of l_0's successors]) when the root of M_T branches and is not pinned:
    T' is rooted at the first leaf. Otherwise ("root", [state ids whose anchor is the root of T]).
    """
    T, M = prob.T, prob.M
    r = T.root
    if not pin_root and len(M.children[r]) >= 2:
        return "leaf", []
    out = []
    for sid, (v, a) in enumerate(prob.states):
        if v in prob.leaves or not (a.is_vertex and a.vertex == r):
            continue
        if pin_root and v != r:
            continue
        out.append(sid)
    return "root", out


def _relaxed(prob: _Problem, pin_root: bool):
    """Vertex-count DP that ignores reuse of a vertex across branches (a lower bound)."""
    k = len(prob.leaves)
    full = (1 << k) - 1
    n_states = len(prob.states)
    leaf_vertices = set(prob.leaves)
    value = {}
    back = {}
    kind, targets = _root_targets(prob, pin_root)
    masks = sorted(range(1, full + 1), key=lambda m: (m.bit_count(), m))
    for S in masks:
        f = [INF] * n_states
        bk: list = [None] * n_states
        if S.bit_count() == 1:
            i = S.bit_length() - 1
            f[prob.leaf_state[i]] = 1
            bk[prob.leaf_state[i]] = ("leaf",)
        else:
            sub = (S - 1) & S
            while sub:
                other = S ^ sub
                if sub < other:
                    fa, fb = value[sub], value[other]
                    for sid in range(n_states):
                        if prob.states[sid][0] in leaf_vertices:
                            continue
                        c = fa[sid] + fb[sid] - 1
                        if c < f[sid]:
                            f[sid] = c
                            bk[sid] = ("merge", sub, other)
                sub = (sub - 1) & S
        heap = [(f[s], s) for s in range(n_states) if f[s] < INF]
        heapq.heapify(heap)
        while heap:
            c, s = heapq.heappop(heap)
            if c > f[s]:
                continue
            for p in prob.preds[s]:
                if c + 1 < f[p]:
                    f[p] = c + 1
                    bk[p] = ("edge", s)
                    heapq.heappush(heap, (c + 1, p))
        value[S], back[S] = f, bk

    best = (INF, None)
    if kind == "leaf":
        rest = full ^ 1
        first = prob.leaf_state[0]
        for s in range(n_states):
            if first in prob.preds[s] or _leaf_to(prob, first, s):
                c = 1 + value[rest][s]
                if c < best[0]:
                    best = (c, ("leafroot", s))
    else:
        for s in targets:
            c = value[full][s]
            if c < best[0]:
                best = (c, ("root", s))
    return best, back, kind


def _leaf_to(prob: _Problem, leaf_sid: int, s: int) -> bool:
    # preds only records non-leaf parents; a leaf may still be the parent when it is the root of T'
    v, a = prob.states[s]
    lv, la = prob.states[leaf_sid]
    if v == lv:
        return False
    surf = EdgeSurface(prob.T.segment(lv, v), prob.M, prob.delta, prob.mode, eps=prob.eps)
    return bool(_reach_pairs(surf, [la], [a]))


def _extract_relaxed(prob: _Problem, back: dict, end) -> tuple[list, list, dict]:
    """Unfold back pointers into (vertex list with repeats, edges, image per vertex)."""
    k = len(prob.leaves)
    full = (1 << k) - 1
    vertices, edges, images = [], [], {}

    def unfold(S: int, s: int):
        v, a = prob.states[s]
        step = back[S][s]
        if step[0] == "leaf":
            return
        if step[0] == "merge":
            unfold(step[1], s)
            unfold(step[2], s)
            return
        c = step[1]
        cv, ca = prob.states[c]
        vertices.append(cv)
        images.setdefault(cv, []).append(ca)
        edges.append((v, cv))
        unfold(S, c)

    tag, s = end
    if tag == "leafroot":
        lv, la = prob.states[prob.leaf_state[0]]
        vertices.append(lv)
        images.setdefault(lv, []).append(la)
        v, a = prob.states[s]
        vertices.append(v)
        images.setdefault(v, []).append(a)
        edges.append((lv, v))
        unfold(full ^ 1, s)
    else:
        v, a = prob.states[s]
        vertices.append(v)
        images.setdefault(v, []).append(a)
        unfold(full, s)
    return vertices, edges, images


def _label_search(prob: _Problem, pin_root: bool, label_cap: int):
    """Exact search over (state, leaf subset, used-vertex set) labels in order of size."""
    k = len(prob.leaves)
    full = (1 << k) - 1
    kind, targets = _root_targets(prob, pin_root)
    target_set = set(targets)
    bit = {v: 1 << i for i, v in enumerate(sorted(prob.anchors))}
    leaf_vertices = set(prob.leaves)
    first = prob.leaf_state[0]
    first_ok = set()
    if kind == "leaf":
        first_ok = {s for s in range(len(prob.states)) if first in prob.preds[s] or _leaf_to(prob, first, s)}
    # labels[(state, S)] = list of (vmask, witness)
    labels: dict = {}
    heap = []
    counter = 0
    for i, s in enumerate(prob.leaf_state):
        v = prob.states[s][0]
        heapq.heappush(heap, (1, counter, s, 1 << i, bit[v], ("leaf",)))
        counter += 1
    popped = 0
    truncated = False
    while heap:
        size, _, s, S, vm, how = heapq.heappop(heap)
        key = (s, S)
        fam = labels.setdefault(key, [])
        if any((old & vm) == old for old, _ in fam):
            continue
        popped += 1
        if popped > label_cap:
            truncated = True
            break
        entry = (vm, (s, S, how))
        fam.append(entry)
        if S == full and kind == "root" and s in target_set:
            return size, entry[1], labels, truncated
        if kind == "leaf" and S == full ^ 1 and s in first_ok and not vm & bit[prob.states[first][0]]:
            return size + 1, ("leafroot", s, S, entry[1]), labels, truncated
        v = prob.states[s][0]
        for p in prob.preds[s]:
            pv = prob.states[p][0]
            if vm & bit[pv]:
                continue
            heapq.heappush(heap, (size + 1, counter, p, S, vm | bit[pv], ("edge", entry[1])))
            counter += 1
        if v in leaf_vertices:
            continue
        for (s2, S2), fam2 in list(labels.items()):
            if s2 != s or S2 & S:
                continue
            for vm2, wit2 in fam2:
                if (vm & vm2) != bit[v]:
                    continue
                merged = vm | vm2
                heapq.heappush(heap, (merged.bit_count(), counter, s, S | S2, merged, ("merge", entry[1], wit2)))
                counter += 1
    return INF, None, labels, truncated


def _extract_labels(prob: _Problem, witness) -> tuple[list, list, dict]:
    vertices, edges, images = [], [], {}

    def place(s):
        v, a = prob.states[s]
        vertices.append(v)
        images.setdefault(v, []).append(a)
        return v

    def unfold(w, top: bool):
        s, S, how = w
        if top:
            place(s)
        v = prob.states[s][0]
        if how[0] == "leaf":
            return
        if how[0] == "edge":
            child = how[1]
            cv = place(child[0])
            edges.append((v, cv))
            unfold(child, False)
            return
        unfold(how[1], False)
        unfold(how[2], False)

    if witness[0] == "leafroot":
        _, s, S, inner = witness
        lv = place(prob.leaf_state[0])
        v = place(s)
        edges.append((lv, v))
        unfold(inner, False)
    else:
        unfold(witness, True)
    return vertices, edges, images


def simplify_leaf_restricted(
    T: RootedTree,
    leaves: Sequence[int],
    delta: float,
    mode: str = "strong",
    *,
    pin_root: bool = False,
    label_cap: int = 200_000,
    verify: bool = True,
    eps: Optional[float] = None,
) -> SimplificationResult:
    """Fewest-vertex T' over V(T) with leaves exactly `leaves` mapping onto T.

    Raises Infeasible when no such tree exists.
    """
    check_mode(mode)
    if not delta > 0:
        raise ValueError("delta must be positive")
    eps = resolve_eps(eps)
    started = time.perf_counter()
    leaves = check_leaf_set(T, leaves)
    prob = _build(T, leaves, delta, mode, eps)
    (cost, end), back, kind = _relaxed(prob, pin_root)
    if cost == INF:
        raise Infeasible("no tree with these leaves maps onto T within delta")
    vertices, edges, images = _extract_relaxed(prob, back, end)
    exact = True
    method = "dp"
    if len(set(vertices)) != len(vertices):
        method = "labels"
        size, witness, _, truncated = _label_search(prob, pin_root, label_cap)
        if witness is None:
            if truncated:
                raise Infeasible("label search hit its cap before finding a tree without repeated vertices")
            raise Infeasible("no tree with these leaves maps onto T within delta")
        exact = not truncated
        vertices, edges, images = _extract_labels(prob, witness)
        cost = size
    image = {v: a[0] for v, a in images.items()}
    if kind == "leaf":
        root = leaves[0]
    else:
        root = vertices[0]
    tree = subtree_of(T, set(vertices), edges, root)
    A = ancestor_tree(prob.M, leaves)
    certificate = _certificate(prob, tree, image)
    stats = {
        "mappingSubtreeVertices": len(prob.M.points),
        "ancestorTreeVertices": len(A.points),
        "rootVertex": None if kind == "leaf" else root,
        "method": method,
        "exact": exact,
        "mode": mode,
        "delta": delta,
        "alpha": max((len(a) for a in prob.anchors.values()), default=0),
    }
    result = SimplificationResult(tree, cost, certificate, stats)
    if verify:
        _verify(prob, tree, kind, root)
    stats["seconds"] = time.perf_counter() - started
    return result


def leaf_pins(leaves: Sequence[int], root_vertex: Optional[int], tree_root: int) -> dict:
    pins = {v: v for v in leaves}
    if root_vertex is not None:
        pins[root_vertex] = tree_root
    return pins


def _verify(prob: _Problem, tree: RootedTree, kind: str, root: int) -> None:
    leaves = prob.leaves
    ends = {v for v in tree.points if tree.degree(v) <= 1}
    allowed = set(leaves) | ({root} if kind == "root" else set())
    problems = []
    if not set(leaves) <= ends or not ends <= allowed:
        problems.append(f"degree-1 vertices {sorted(ends)} do not match the leaf set {sorted(leaves)}")
    pins = leaf_pins(leaves, root if kind == "root" else None, prob.T.root)
    if not decide_graph_distance_tree_to_graph(tree, prob.M, prob.delta, prob.mode, pins=pins, eps=prob.eps):
        problems.append("extracted tree fails the graph-distance decision onto the mapping subtree")
    if problems:
        raise VerificationError("; ".join(problems), {"edges": sorted(tree.edges), "leaves": leaves})


def _anchor_point(a: Anchor, M: RootedTree) -> Point:
    if a.is_vertex:
        return M.points[a.vertex]
    return M.edge_segment(a.edge).at(0.5 * (a.interval.lo + a.interval.hi))


def _tree_path(M: RootedTree, x: int, y: int) -> list[int]:
    px, py = M.path_to_root(x), M.path_to_root(y)
    on_y = set(py)
    up = []
    for v in px:
        up.append(v)
        if v in on_y:
            meet = v
            break
    down = py[: py.index(meet)]
    return up + down[::-1]


def _image_polyline(a: Anchor, b: Anchor, M: RootedTree) -> Polyline:
    """The path of M_T between two anchor points, as a polyline."""
    pa, pb = _anchor_point(a, M), _anchor_point(b, M)
    if not a.is_vertex and not b.is_vertex and a.edge == b.edge:
        return Polyline([pa, pb])
    ends_a = [a.vertex] if a.is_vertex else list(M.edges[a.edge])
    ends_b = [b.vertex] if b.is_vertex else list(M.edges[b.edge])
    best = None
    for x in ends_a:
        for y in ends_b:
            path = _tree_path(M, x, y)
            # a chord end is left through the endpoint that lies on the way
            if not a.is_vertex and len(path) > 1 and path[1] in ends_a:
                continue
            if not b.is_vertex and len(path) > 1 and path[-2] in ends_b:
                continue
            if best is None or len(path) < len(best):
                best = path
    pts = [pa] + [M.points[v] for v in best] + [pb]
    cleaned = [pts[0]]
    for p in pts[1:]:
        if p != cleaned[-1]:
            cleaned.append(p)
    return Polyline(cleaned)


def _certificate(prob: _Problem, tree: RootedTree, image: dict) -> dict:
    images = {}
    for v, a in image.items():
        p = _anchor_point(a, prob.M)
        images[v] = {"point": [p.x, p.y], "vertex": a.vertex, "edge": None if a.is_vertex else list(prob.M.edges[a.edge])}
    paths = {}
    for u, v in tree.tree_edges():
        poly = _image_polyline(image[u], image[v], prob.M)
        paths[f"{u}-{v}"] = [[p.x, p.y] for p in poly]
    return {"images": images, "paths": paths}


def witness_mapping(result: SimplificationResult, T: RootedTree, delta: float, mode: str = "strong") -> dict:
    """Explicit image of every T' vertex on T, with each edge's image path and its Fréchet check."""
    check_mode(mode)
    cert = result.certificate
    edges = {}
    for key, pts in cert["paths"].items():
        u, v = (int(x) for x in key.split("-"))
        seg = Polyline([result.tree.points[u], result.tree.points[v]])
        image = Polyline(pts)
        edges[(u, v)] = {"image": image, "frechetOk": decide_frechet(seg, image, delta, mode)}
    points = {v: Point(*rec["point"]) for v, rec in cert["images"].items()}
    return {"vertices": points, "edges": edges}
