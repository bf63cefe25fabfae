"""Minimum-vertex simplification of a tree T by a tree T' drawn from T's shortcut graph,
such that T maps into T' with every edge within (weak) Fréchet distance delta.

The table is indexed by (tree vertex, anchor). Besides the scalar cost psi it keeps,
per anchor, the inclusion-minimal edge sets of the shortcut graph that can host the
subtree below that vertex. Summing child costs alone would count twice any output
vertex shared by sibling images; taking unions of hosting sets does not, so the
minimum over the root's anchors is the true optimum. The classic sum-of-(psi + kappa)
recurrence is evaluated alongside and reported as the paper cost.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from .freespace import (
    INF,
    Anchor,
    EdgeSurface,
    compute_slices,
    decide_graph_distance_tree_to_graph,
    slice_alpha,
    usable_anchors,
)
from .frechet import check_mode
from .geom import resolve_eps
from .graph import ImmersedGraph, RootedTree, build_shortcut_graph
from .result import AlphaCapExceeded, SimplificationResult, VerificationError, subtree_of


# ---------------------------------------------------------------------------
# weighted set cover over a small universe


def solve_interval_cover(children: Sequence, candidates: Sequence, coverage: Sequence) -> Optional[tuple]:
    """Exact minimum-cost cover of `children` by candidates.

    candidates[i] is (label, cost) and coverage[i] the subset of children it covers.
    Dynamic program over child bitmasks; ties go to the lexicographically smallest
    set of candidate indices. Returns (cost, chosen indices) or None.
    """
    index = {c: i for i, c in enumerate(children)}
    full = (1 << len(children)) - 1
    masks = []
    for cov in coverage:
        m = 0
        for c in cov:
            if c not in index:
                raise ValueError(f"coverage mentions {c!r}, which is not a child")
            m |= 1 << index[c]
        masks.append(m)
    best: list = [None] * (full + 1)
    best[0] = (0, ())
    for mask in range(full + 1):
        cur = best[mask]
        if cur is None:
            continue
        for i, (_, cost) in enumerate(candidates):
            if cost == INF or masks[i] == 0 or masks[i] | mask == mask or i in cur[1]:
                continue
            new = mask | masks[i]
            cand = (cur[0] + cost, tuple(sorted(cur[1] + (i,))))
            if best[new] is None or cand < best[new]:
                best[new] = cand
    return best[full]


# ---------------------------------------------------------------------------
# hosting sets


class Piece(NamedTuple):
    vmask: int
    emask: int
    anchor: int
    parts: tuple  # ((child, child_anchor, path_vertices, child_piece), ...)


def _size(p) -> tuple:
    return (p[0].bit_count(), p[1].bit_count())


def minimal_family(pieces: list, cap: int) -> tuple[list, bool]:
    """Drop pieces whose vertex and edge sets both contain another's; keep at most cap."""
    pieces = sorted(pieces, key=lambda p: (_size(p), p[0], p[1]))
    kept: list = []
    for p in pieces:
        pv, pe = p[0], p[1]
        if any((k[0] & pv) == k[0] and (k[1] & pe) == k[1] for k in kept):
            continue
        kept.append(p)
    if len(kept) > cap:
        return kept[:cap], True
    return kept, False


def reduce_by_interface(pieces: list, vout: int, eout: int) -> list:
    """Keep one piece per (outside-visible vertices, outside-visible edges) signature.

    Parts of a piece that nothing outside its subtree can touch only add to the vertex
    count, so among pieces with the same visible part the one with fewest hidden
    vertices is never worse.
    """
    best: dict = {}
    for p in pieces:
        sig = (p[0] & vout, p[1] & eout)
        key = ((p[0] & ~vout).bit_count(), p[0].bit_count(), p[0], p[1])
        if sig not in best or key < best[sig][0]:
            best[sig] = (key, p)
    return [p for _, p in best.values()]


def _acyclic(vmask: int, emask: int) -> bool:
    return emask.bit_count() == vmask.bit_count() - 1


@dataclass
class HostContext:
    """Bit numbering of shortcut-graph vertices and edges."""

    G: ImmersedGraph
    vbit: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vbit = {w: 1 << i for i, w in enumerate(sorted(self.G.points))}

    def base(self, a: Anchor) -> tuple[int, int]:
        if a.is_vertex:
            return self.vbit[a.vertex], 0
        x, y = self.G.edges[a.edge]
        return self.vbit[x] | self.vbit[y], 1 << a.edge

    def vertices(self, vmask: int) -> list[int]:
        return [w for w, b in self.vbit.items() if vmask & b]

    def edges(self, emask: int) -> list[tuple[int, int]]:
        out, k = [], 0
        while emask:
            if emask & 1:
                out.append(self.G.edges[k])
            emask >>= 1
            k += 1
        return out


def valid_paths(
    surf: EdgeSurface, ctx: HostContext, a: Anchor, targets: Sequence[Anchor], limit: int
) -> tuple[list, bool]:
    """Every simple path of the graph from anchor a (t = 0) to some target anchor (t = 1) that is
    valid for the surface's tree edge. Items are (target index, vmask, emask, vertex sequence)."""
    G = ctx.G
    vertex_target = {b.vertex: i for i, b in enumerate(targets) if b.is_vertex}
    edge_target_at: dict[int, list] = {}
    edge_target = {}
    for i, b in enumerate(targets):
        if b.is_vertex or not surf.edge_usable(b.edge):
            continue
        edge_target[b.edge] = i
        x, y = G.edges[b.edge]
        edge_target_at.setdefault(x, []).append((y, b.edge, i))
        edge_target_at.setdefault(y, []).append((x, b.edge, i))
    out: list = []
    truncated = False
    bv, be = ctx.base(a)
    vbit = ctx.vbit

    def emit(item) -> bool:
        nonlocal truncated
        if len(out) >= limit:
            truncated = True
            return False
        out.append(item)
        return True

    def visit(w: int, t: float, vmask: int, emask: int, seq: tuple) -> bool:
        if w in vertex_target and surf.at_end(w):
            if not emit((vertex_target[w], vmask, emask, seq)):
                return False
        for x, k, i in edge_target_at.get(w, ()):
            if not vmask & vbit[x]:
                if not emit((i, vmask | vbit[x], emask | (1 << k), seq)):
                    return False
        for x, k in surf.nbrs[w]:
            if vmask & vbit[x]:
                continue
            arrive = surf.step(t, x)
            if arrive is None:
                continue
            if not visit(x, arrive, vmask | vbit[x], emask | (1 << k), seq + (x,)):
                return False
        return True

    if not a.is_vertex and a.edge in edge_target and surf.edge_usable(a.edge):
        emit((edge_target[a.edge], bv, be, ()))
    for w, t, _ in surf.source_entries(a):
        if not visit(w, t, bv, be, (w,)):
            break
    return out, truncated


# ---------------------------------------------------------------------------
# the algorithm


def _outside_masks(T: RootedTree, ctx: HostContext, anchors, paths) -> tuple[dict, dict]:
    """Per tree vertex v: graph vertices and edges usable by tree edges outside v's subtree
    (the edge into v counts as outside)."""
    vm, em = {}, {}
    for (u, v), rows in paths.items():
        vmask = emask = 0
        for a in anchors[u] + anchors[v]:
            bv, be = ctx.base(a)
            vmask, emask = vmask | bv, emask | be
        for row in rows:
            for _, pv, pe, _ in row:
                vmask, emask = vmask | pv, emask | pe
        vm[v], em[v] = vmask, emask
    vout, eout = {}, {}
    for v in T.points:
        if v == T.root:
            vout[v] = eout[v] = 0
            continue
        inside = set(T.subtree_vertices(v)) - {v}
        ov = oe = 0
        for x in T.points:
            if x != T.root and x not in inside:
                ov, oe = ov | vm[x], oe | em[x]
        vout[v], eout[v] = ov, oe
    return vout, eout


def _psi_scalar(T: RootedTree, anchors, kap, normalized: bool, G: Optional[ImmersedGraph] = None) -> dict:
    """Sum-of-(psi + kappa) recurrence.

    Literal: a leaf costs 1 and each child adds psi + kappa.
    Normalized: junctions and the root sit on graph vertices, every anchor pays for the
    graph vertices it introduces that its parent's anchor does not already hold, and kappa
    skips vertices already held by either end (so the value bounds its own witness).
    """
    psi: dict = {}
    for u in T.postorder():
        kids = T.children[u]
        junction = normalized and (len(kids) >= 2 or u == T.root)
        row = []
        for ai, a in enumerate(anchors[u]):
            own = set(a.graph_vertices(G)) if normalized else set()
            if not kids:
                row.append(len(own) if normalized else 1)
                continue
            if junction and not a.is_vertex:
                row.append(INF)
                continue
            cands, cover = [], []
            for v in kids:
                for bi, b in enumerate(anchors[v]):
                    cost = psi[v][bi] + kap[(u, v)][ai][bi]
                    if normalized:
                        cost -= len(own.intersection(b.graph_vertices(G)))
                    if cost < INF:
                        cands.append(((v, bi), cost))
                        cover.append({v})
            sol = solve_interval_cover(kids, cands, cover)
            row.append(INF if sol is None else sol[0] + len(own))
        psi[u] = row
    return psi


def simplify_vertex_restricted(
    T: RootedTree,
    delta: float,
    mode: str = "strong",
    *,
    alpha_cap: Optional[int] = None,
    paper_literal: bool = False,
    family_cap: int = 4096,
    path_cap: int = 50_000,
    verify: bool = True,
    eps: Optional[float] = None,
) -> SimplificationResult:
    check_mode(mode)
    if not delta > 0:
        raise ValueError("delta must be positive")
    eps = resolve_eps(eps)
    started = time.perf_counter()
    G = build_shortcut_graph(T)
    ctx = HostContext(G)
    anchors, pruned = usable_anchors(T, G, delta, mode, eps)
    alpha = max((len(a) for a in anchors.values()), default=0)
    if alpha_cap is not None and alpha > alpha_cap:
        raise AlphaCapExceeded(alpha, alpha_cap)

    paths: dict = {}
    kap: dict = {}
    kap_held: dict = {}
    truncated = False
    for u, v in T.tree_edges():
        surf = EdgeSurface(T.segment(u, v), G, delta, mode, allowed=pruned.survivors[(u, v)], eps=eps)
        paths[(u, v)] = []
        kap[(u, v)] = []
        kap_held[(u, v)] = []
        for a in anchors[u]:
            found, cut = valid_paths(surf, ctx, a, anchors[v], path_cap)
            truncated |= cut
            paths[(u, v)].append(found)
            kap[(u, v)].append([surf.kappa(a, b) for b in anchors[v]])
            held = set(a.graph_vertices(G))
            kap_held[(u, v)].append(
                [surf.kappa(a, b, frozenset(held.union(b.graph_vertices(G)))) for b in anchors[v]]
            )

    vout, eout = _outside_masks(T, ctx, anchors, paths)
    family: dict = {}
    for u in T.postorder():
        row = []
        for ai, a in enumerate(anchors[u]):
            bv, be = ctx.base(a)
            acc = [Piece(bv, be, ai, ())]
            for v in T.children[u]:
                cand = []
                for bi, pv, pe, seq in paths[(u, v)][ai]:
                    for X in family[v][bi]:
                        V, E = pv | X.vmask, pe | X.emask
                        if _acyclic(V, E):
                            cand.append((V, E, (v, bi, seq, X)))
                cand = reduce_by_interface(cand, vout[v], eout[v])
                cand, cut = minimal_family(cand, family_cap)
                truncated |= cut
                merged = []
                for A in acc:
                    for V, E, part in cand:
                        V2, E2 = A.vmask | V, A.emask | E
                        if _acyclic(V2, E2):
                            merged.append(Piece(V2, E2, ai, A.parts + (part,)))
                acc, cut = minimal_family(merged, family_cap)
                truncated |= cut
                if not acc:
                    break
            if u != T.root:
                acc, _ = minimal_family(reduce_by_interface(acc, vout[u], eout[u]), family_cap)
            row.append(acc)
        family[u] = row

    psi = {u: [min((p.vmask.bit_count() for p in fam), default=INF) for fam in family[u]] for u in T.points}
    best = None
    for fam in family[T.root]:
        for p in fam:
            key = (p.vmask.bit_count(), p.emask.bit_count(), ctx.vertices(p.vmask), ctx.edges(p.emask))
            if best is None or key < best[0]:
                best = (key, p)
    if best is None:
        raise VerificationError("no feasible simplification found; the input tree itself should always be one")
    piece = best[1]

    images, edge_paths = {}, {}

    def unwind(u: int, p: Piece) -> None:
        images[u] = anchors[u][p.anchor]
        for v, bi, seq, X in p.parts:
            edge_paths[(u, v)] = list(seq)
            unwind(v, X)

    unwind(T.root, piece)
    root_anchor = images[T.root]
    out_root = root_anchor.vertex if root_anchor.is_vertex else min(G.edges[root_anchor.edge])
    tree = subtree_of(T, ctx.vertices(piece.vmask), ctx.edges(piece.emask), out_root)

    psi_lit = _psi_scalar(T, anchors, kap, normalized=False)
    psi_norm = _psi_scalar(T, anchors, kap_held, normalized=True, G=G)
    cost_lit = min(psi_lit[T.root], default=INF)
    cost_norm = min(psi_norm[T.root], default=INF)

    certificate = {
        "images": {u: _anchor_record(a, G) for u, a in images.items()},
        "paths": {f"{u}-{v}": seq for (u, v), seq in edge_paths.items()},
    }
    stats = {
        "alpha": alpha,
        "sliceAlpha": slice_alpha(compute_slices(T, pruned.subgraph(), delta, eps)),
        "psiRoot": psi[T.root],
        "paperCostLiteral": cost_lit,
        "paperCostNormalized": cost_norm,
        "exact": not truncated,
        "mode": mode,
        "delta": delta,
    }
    result = SimplificationResult(tree, cost_lit if paper_literal else cost_norm, certificate, stats)
    if verify and not decide_graph_distance_tree_to_graph(T, tree, delta, mode, eps=eps):
        raise VerificationError(
            "extracted tree fails the graph-distance decision",
            {"tree": sorted(tree.edges), "certificate": certificate, "delta": delta, "mode": mode},
        )
    stats["seconds"] = time.perf_counter() - started
    return result


def _anchor_record(a: Anchor, G: ImmersedGraph) -> dict:
    if a.is_vertex:
        p = G.points[a.vertex]
        return {"vertex": a.vertex, "point": [p.x, p.y]}
    seg = G.edge_segment(a.edge)
    mid = seg.at(0.5 * (a.interval.lo + a.interval.hi))
    return {"edge": list(G.edges[a.edge]), "interval": [a.interval.lo, a.interval.hi], "point": [mid.x, mid.y]}
