"""Instance generators for the hardness reductions, with canonical witnesses.

Four constructions:
  mdsudg traversal tree   dominating set in a unit disk graph -> vertex-restricted tree
                          simplification under the traversal distance
  mdsudg star             the same source problem, leaf-restricted, graph distance
  max2sat graph           bipartite Max-2SAT -> vertex-restricted graph simplification
  subset sum chain        subset sum -> edge-restricted curve / tree / graph simplification

Every instance carries its layout in meta so that a saved file reproduces the geometry
that was checked.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Optional, Sequence, Union

import networkx as nx
import numpy as np

from .frechet import Polyline, decide_frechet
from .freespace import decide_graph_distance_tree_to_graph
from .geom import Point, dist
from .graph import ImmersedGraph, RootedTree, graph_from_dict, graph_to_dict
from .oracles import subset_sum

MDSUDG_TRAVERSAL = "mdsudg-traversal-tree"
MDSUDG_STAR = "mdsudg-leaf-star"
MAX2SAT = "max2sat-graph"
SUBSET_SUM = "subset-sum-chain"


class LayoutError(ValueError):
    """A layout that violates a separation the construction depends on."""


@dataclass
class GadgetInstance:
    graph: Union[ImmersedGraph, RootedTree]
    delta: float
    meta: dict
    witness_hint: Optional[dict] = None

    def to_dict(self) -> dict:
        data = graph_to_dict(self.graph)
        data["meta"] = {
            **{k: v for k, v in self.graph.meta.items() if k != "instance"},
            "instance": {"delta": self.delta, **self.meta, "witnessHint": self.witness_hint},
        }
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "GadgetInstance":
        g = graph_from_dict(data)
        info = dict(g.meta.pop("instance"))
        delta = info.pop("delta")
        hint = info.pop("witnessHint", None)
        return cls(g, delta, info, hint)


def save_instance(inst: GadgetInstance, path) -> None:
    Path(path).write_text(json.dumps(inst.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_instance(path) -> GadgetInstance:
    return GadgetInstance.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _pt(p) -> Point:
    return p if isinstance(p, Point) else Point(float(p[0]), float(p[1]))


def _check_distinct(P: Sequence[Point]) -> None:
    if len(set(P)) != len(P):
        raise LayoutError("points must be pairwise distinct")
    if not P:
        raise LayoutError("need at least one point")


def _line_distance(q: Point, a: Point, b: Point) -> float:
    dx, dy = b.x - a.x, b.y - a.y
    return abs(dx * (q.y - a.y) - dy * (q.x - a.x)) / math.hypot(dx, dy)


def unit_disk_bbox(P: Sequence[Point], radius: float = 1.0) -> tuple[float, float, float, float]:
    xs = [p.x for p in P]
    ys = [p.y for p in P]
    return min(xs) - radius, min(ys) - radius, max(xs) + radius, max(ys) + radius


# ---------------------------------------------------------------------------
# dominating set -> traversal distance tree


DEFAULT_TRAVERSAL_LAYOUT = {
    "translationHeight": 100.0,
    "hubOffset": 100.0,
    "hubShift": 0.6180339887,
    "zigzagHalf": 1.0,
    "pointZigzags": False,
    "minLineClearance": 1e-3,
}


def gen_mdsudg_traversal_instance(P: Sequence, layout: Optional[dict] = None) -> GadgetInstance:
    """Tree whose traversal-distance simplifications encode dominating sets of P.

    Ids: p_i = i, p'_i = n + i, hub w = 2n, centers 2n+1+i, bottleneck zigzag ends 3n+1+2i
    and 3n+2+2i, point zigzag ends 5n+1+2i and 5n+2+2i. Rooted at w.
    """
    lay = {**DEFAULT_TRAVERSAL_LAYOUT, **(layout or {})}
    P = [_pt(p) for p in P]
    _check_distinct(P)
    n = len(P)
    H = float(lay["translationHeight"])
    if not H > 10:
        raise LayoutError("translationHeight must exceed 10")
    half = float(lay["zigzagHalf"])
    Pp = [Point(p.x, p.y + H) for p in P]
    cx = sum(p.x for p in P) / n
    w = Point(cx + float(lay["hubShift"]), max(p.y for p in Pp) + float(lay["hubOffset"]))
    support = P + Pp
    clearance = float(lay["minLineClearance"])
    for a, b in combinations(support, 2):
        if _line_distance(w, a, b) <= clearance:
            raise LayoutError(
                f"hub {tuple(w)} lies on the line through {tuple(a)} and {tuple(b)}; "
                "change layout['hubShift'] or layout['hubOffset']"
            )
    pts: dict[int, Point] = {}
    labels: dict[int, str] = {}
    edges: list[tuple[int, int]] = []
    for i in range(n):
        pts[i], labels[i] = P[i], f"p{i}"
        pts[n + i], labels[n + i] = Pp[i], f"p'{i}"
        edges.append((i, n + i))
    hub = 2 * n
    pts[hub], labels[hub] = w, "w"
    zig_offsets = []
    for i in range(n):
        c = Point((Pp[i].x + w.x) / 2, (Pp[i].y + w.y) / 2)
        ux, uy = w.x - Pp[i].x, w.y - Pp[i].y
        norm = math.hypot(ux, uy)
        nx_, ny_ = -uy / norm, ux / norm
        cid = 2 * n + 1 + i
        pts[cid], labels[cid] = c, f"c{i}"
        edges += [(n + i, cid), (cid, hub)]
        for k, sign in enumerate((1, -1)):
            zid = 3 * n + 1 + 2 * i + k
            pts[zid] = Point(c.x + sign * half * nx_, c.y + sign * half * ny_)
            labels[zid] = f"z{i}{'+-'[k]}"
            edges.append((cid, zid))
        zig_offsets.append([half * nx_, half * ny_])
    if lay["pointZigzags"]:
        # perpendicular to the vertical p-p' edge, so horizontal
        for i in range(n):
            for k, sign in enumerate((1, -1)):
                zid = 5 * n + 1 + 2 * i + k
                pts[zid] = Point(P[i].x + sign * half, P[i].y)
                labels[zid] = f"q{i}{'+-'[k]}"
                edges.append((i, zid))
    meta = {
        "reduction": MDSUDG_TRAVERSAL,
        "theorem": "vertex-restricted tree-tree simplification under the traversal distance is NP-hard",
        "params": {"points": [list(p) for p in P], "layout": lay},
        "n": n,
        "expectedRelation": "dominating set of size k <=> simplified tree with n+k edges",
        "ids": {"points": list(range(n)), "translated": list(range(n, 2 * n)), "hub": hub,
                "centers": list(range(2 * n + 1, 3 * n + 1))},
        "zigzagOffsets": zig_offsets,
    }
    tree = RootedTree(pts, edges, hub, labels)
    return GadgetInstance(tree, 1.0, meta)


def mdsudg_traversal_witness(inst: GadgetInstance, dominating: Sequence[int]) -> RootedTree:
    """The n links hub -> p'_i plus one link p'_s -> p_s per dominating point s."""
    n = inst.meta["n"]
    hub = inst.meta["ids"]["hub"]
    S = sorted(set(int(s) for s in dominating))
    V = [hub] + list(range(n, 2 * n)) + S
    E = [(hub, n + i) for i in range(n)] + [(n + s, s) for s in S]
    g = inst.graph
    return RootedTree({v: g.points[v] for v in V}, E, hub, {v: g.labels.get(v, "") for v in V})


# ---------------------------------------------------------------------------
# dominating set -> leaf-restricted star


def gen_mdsudg_leaf_instance(P: Sequence, w=None) -> GadgetInstance:
    """Star from a far hub w to every point. Ids: p_i = i, w = n, rooted at w."""
    P = [_pt(p) for p in P]
    _check_distinct(P)
    n = len(P)
    x0, y0, x1, y1 = unit_disk_bbox(P)
    diam = math.hypot(x1 - x0, y1 - y0)
    need = 10 * diam + 10
    if w is None:
        w = Point((x0 + x1) / 2, y1 + need + 1)
    w = _pt(w)
    gap = math.hypot(max(x0 - w.x, 0, w.x - x1), max(y0 - w.y, 0, w.y - y1))
    if not gap > need:
        raise LayoutError(f"hub is {gap:.3f} from the unit-disk box; it must be farther than {need:.3f}")
    pts = {i: P[i] for i in range(n)}
    pts[n] = w
    labels = {i: f"p{i}" for i in range(n)}
    labels[n] = "w"
    meta = {
        "reduction": MDSUDG_STAR,
        "theorem": "leaf-restricted tree-tree simplification under graph and traversal distance is NP-hard",
        "params": {"points": [list(p) for p in P], "hub": list(w)},
        "n": n,
        "expectedRelation": "dominating set of size <= k <=> leaf-restricted simplification with at most k+1 vertices",
        "ids": {"points": list(range(n)), "hub": n},
    }
    return GadgetInstance(RootedTree(pts, [(i, n) for i in range(n)], n, labels), 1.0, meta)


def mdsudg_leaf_witness(inst: GadgetInstance, dominating: Sequence[int]) -> RootedTree:
    hub = inst.meta["ids"]["hub"]
    S = sorted(set(int(s) for s in dominating))
    g = inst.graph
    return RootedTree({v: g.points[v] for v in [hub] + S}, [(hub, s) for s in S], hub)


# ---------------------------------------------------------------------------
# 3-SAT -> bipartite Max-2SAT


@dataclass
class Cnf2:
    """Clauses of one or two signed, 1-based variable indices."""

    num_vars: int
    clauses: list = field(default_factory=list)

    def __post_init__(self):
        self.clauses = [tuple(int(l) for l in c) for c in self.clauses]
        for c in self.clauses:
            if len(c) not in (1, 2) or any(l == 0 or abs(l) > self.num_vars for l in c):
                raise ValueError(f"bad clause {c}")

    def variable_graph(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(1, self.num_vars + 1))
        for c in self.clauses:
            if len(c) == 2 and abs(c[0]) != abs(c[1]):
                G.add_edge(abs(c[0]), abs(c[1]))
        return G

    def is_bipartite(self) -> bool:
        return nx.is_bipartite(self.variable_graph())


def transform_3sat_to_bipartite_max2sat(F: Sequence[Sequence[int]], num_vars: Optional[int] = None) -> tuple[Cnf2, int]:
    """Replace every 3-clause (x or y or z) with a 16-clause block over fresh a,b,c,w,d1,d2,d3.

    Returns the 2-CNF and k = 13m. Input variables keep their indices; block j's auxiliaries
    are num_vars + 7j + 1 ... num_vars + 7j + 7 in the order a, b, c, w, d1, d2, d3.
    """
    F = [tuple(int(l) for l in c) for c in F]
    for c in F:
        if len(c) != 3:
            raise ValueError("every clause needs exactly three literals (repeat a literal to pad)")
    n = num_vars if num_vars is not None else max((abs(l) for c in F for l in c), default=0)
    out = []
    for j, (x, y, z) in enumerate(F):
        a, b, c, w, d1, d2, d3 = (n + 7 * j + k for k in range(1, 8))
        out += [
            (-x, a), (-x, -b), (-y, b), (-y, -c), (-z, c), (-z, -a),
            (-w, d1), (-w, d2), (-w, d3),
            (x, -d1), (y, -d2), (z, -d3),
            (x,), (y,), (z,), (w,),
        ]
    cnf = Cnf2(n + 7 * len(F), out)
    if not cnf.is_bipartite():
        raise AssertionError("transform produced a non-bipartite variable graph")
    return cnf, 13 * len(F)


# ---------------------------------------------------------------------------
# bipartite Max-2SAT -> graph


DEFAULT_MAX2SAT_LAYOUT = {"L": 100.0, "spacing": 10.0, "epsilonHook": 0.01, "pairHalf": 0.45}


def _seg_dist(q: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from points q (k, 2) to segments a (k, 2)-b (2,) or (k, 2)."""
    ab = b - a
    t = np.clip(np.einsum("ij,ij->i", q - a, ab) / np.einsum("ij,ij->i", ab, ab), 0.0, 1.0)
    return np.hypot(*(q - (a + t[:, None] * ab)).T)


def _place_binary_hook(ti, fi, tj, fj, L, avoid, clearance, near=True):
    """Best hook position and barb for a two-literal clause.

    The barb sits on the bisector of the wedge spanned by the hook->true-literal segments,
    within distance 1 of both and beyond distance 1 of both hook->false-literal segments.
    Hooks are searched on a grid around the two variables; the returned margin is the
    smallest slack on either side of 1.
    """
    ti, fi, tj, fj = map(np.asarray, (ti, fi, tj, fj))
    mid = (ti + tj) / 2
    gx, gy = np.meshgrid(np.arange(-3 * L, 3 * L + 1e-9, L / 40), np.arange(-2 * L, 2 * L + 1e-9, L / 40))
    hooks = mid + np.column_stack([gx.ravel(), gy.ravel()])
    for p in [ti, tj] + list(avoid):
        hooks = hooks[np.hypot(*(hooks - p).T) > clearance]
    ui = (ti - hooks) / np.hypot(*(ti - hooks).T)[:, None]
    uj = (tj - hooks) / np.hypot(*(tj - hooks).T)[:, None]
    bis = ui + uj
    norm = np.hypot(*bis.T)
    wedge = np.abs(ui[:, 0] * uj[:, 1] - ui[:, 1] * uj[:, 0])
    ok = (norm > 1e-6) & (wedge > 1e-3)
    hooks, bis, norm = hooks[ok], bis[ok], norm[ok]
    bis /= norm[:, None]
    s = np.abs(ui[ok][:, 0] * bis[:, 1] - ui[ok][:, 1] * bis[:, 0])
    best = (-np.inf, None, None)
    for d in np.linspace(0.97, 1.0, 31):
        q = hooks + (d / s)[:, None] * bis
        t_far = np.maximum(_seg_dist(q, hooks, ti), _seg_dist(q, hooks, tj))
        f_near = np.minimum(_seg_dist(q, hooks, fi), _seg_dist(q, hooks, fj))
        margin = np.minimum(1 - t_far, f_near - 1)
        if near:
            # the barb belongs to the hook, far from every variable
            margin[np.hypot(*(q - hooks).T) > 0.1 * L] = -np.inf
        k = int(np.argmax(margin))
        if margin[k] > best[0]:
            best = (float(margin[k]), hooks[k], q[k])
    if near and best[0] < 1e-3:
        return _place_binary_hook(ti, fi, tj, fj, L, avoid, clearance, near=False)
    if not best[0] > 1e-6:
        raise LayoutError("no hook placement separates the literals; change layout['L'] or layout['pairHalf']")
    return Point(*map(float, best[1])), Point(*map(float, best[2])), best[0], near


def _place_unary_barb(h, t, f):
    """Barb beside the middle of hook->t, on the side away from f."""
    h, t, f = map(np.asarray, (h, t, f))
    mid = (h + t) / 2
    u = (t - h) / np.hypot(*(t - h))
    normal = np.array([-u[1], u[0]])
    if np.dot(f - t, normal) > 0:
        normal = -normal
    sep = _seg_dist((mid + 1.0 * normal)[None], h[None], f)[0] - 1
    q = mid + (1 - sep / 2) * normal
    t_d = _seg_dist(q[None], h[None], t)[0]
    f_d = _seg_dist(q[None], h[None], f)[0]
    if not (t_d < 1 and f_d > 1):
        raise LayoutError("unary barb lost its separation")
    return Point(*q), float(min(1 - t_d, f_d - 1))


def gen_max2sat_instance(F2: Cnf2, layout: Optional[dict] = None) -> GadgetInstance:
    """Variable pairs T_i (upper) / F_i (lower) on two horizontal lines; one hook star per clause.

    A clause gadget is a hook h with four spokes, one to each of the four literal vertices
    of its two variables, each through an interior vertex at distance epsilonHook from h,
    plus a barb vertex hanging from h. Unary clauses pair their variable with a fresh
    partner variable on the other line.
    """
    lay = {**DEFAULT_MAX2SAT_LAYOUT, **(layout or {})}
    L, spacing, eps_hook, half = (float(lay[k]) for k in ("L", "spacing", "epsilonHook", "pairHalf"))
    if not (L > 10 and spacing > 2 and 0 < eps_hook < 0.1 and 0 < half < 0.5):
        raise LayoutError("need L > 10, spacing > 2, 0 < epsilonHook < 0.1, 0 < pairHalf < 0.5")
    if not F2.is_bipartite():
        raise LayoutError("variable graph is not bipartite")
    G = F2.variable_graph()
    side = {}
    for comp in nx.connected_components(G):
        colors = nx.bipartite.color(G.subgraph(comp))
        side.update(colors)
    num_vars = F2.num_vars
    partners = {}
    for ci, c in enumerate(F2.clauses):
        if len(c) == 1 or abs(c[0]) == abs(c[1]):
            num_vars += 1
            partners[ci] = num_vars
            side[num_vars] = 1 - side[abs(c[0])]
    rank = [0, 0]
    pts: dict[int, Point] = {}
    labels: dict[int, str] = {}
    var_ids = {}
    for v in range(1, num_vars + 1):
        s = side.get(v, 0)
        # the upper line is staggered by half a spacing: vertically aligned variables admit no hook
        x = spacing * rank[s] + 0.5 * spacing * s
        rank[s] += 1
        y = L * s
        t_id, f_id = 2 * (v - 1), 2 * (v - 1) + 1
        pts[t_id], labels[t_id] = Point(x, y + half), f"T{v}"
        pts[f_id], labels[f_id] = Point(x, y - half), f"F{v}"
        var_ids[v] = (t_id, f_id)
    next_id = 2 * num_vars
    edges = []
    gadgets = []
    avoid = [np.asarray(p) for p in pts.values()]
    for ci, c in enumerate(F2.clauses):
        lits = [c[0]] if ci in partners else list(c)
        vs = [abs(l) for l in lits] + ([partners[ci]] if ci in partners else [])
        true_v = [var_ids[abs(l)][0 if l > 0 else 1] for l in lits]
        false_v = [var_ids[abs(l)][1 if l > 0 else 0] for l in lits]
        if len(lits) == 2:
            h, barb, margin, near = _place_binary_hook(
                *(pts[k] for k in (true_v[0], false_v[0], true_v[1], false_v[1])), L, avoid, 4 * spacing
            )
        else:
            a, b = pts[var_ids[vs[0]][0]], pts[var_ids[vs[1]][0]]
            # to the right of both variables at mid height, so the partner's spokes stay far away
            h = Point(max(a.x, b.x) + L, (a.y + b.y) / 2 + spacing * ci * 0.01)
            barb, margin = _place_unary_barb(h, pts[true_v[0]], pts[false_v[0]])
            near = False
        hid, bid = next_id, next_id + 1
        next_id += 2
        pts[hid], labels[hid] = h, f"h{ci}"
        pts[bid], labels[bid] = barb, f"b{ci}"
        edges.append((hid, bid))
        spokes = []
        for v in vs:
            for vid in var_ids[v]:
                p = pts[vid]
                r = dist(p, h)
                uid = next_id
                next_id += 1
                pts[uid] = Point(h.x + eps_hook * (p.x - h.x) / r, h.y + eps_hook * (p.y - h.y) / r)
                labels[uid] = f"u{ci}.{labels[vid]}"
                edges += [(vid, uid), (uid, hid)]
                spokes.append(uid)
        avoid += [np.asarray(h)]
        gadgets.append({"clause": list(c), "hook": hid, "barb": bid, "spokes": spokes,
                        "variables": vs, "margin": margin, "barbNearHook": near})
    m = len(F2.clauses)
    meta = {
        "reduction": MAX2SAT,
        "theorem": "subgraph-restricted min-complexity graph-graph simplification under the graph distance is NP-hard",
        "params": {"numVars": F2.num_vars, "clauses": [list(c) for c in F2.clauses], "layout": lay},
        "m": m,
        "expectedRelation": "assignment satisfying >= k clauses <=> simplified graph with |E|+|V| <= 6m-2k+1",
        "variableIds": {str(v): list(ids) for v, ids in var_ids.items()},
        "partners": {str(ci): v for ci, v in partners.items()},
        "gadgets": gadgets,
        "minMargin": min((g["margin"] for g in gadgets), default=None),
    }
    return GadgetInstance(ImmersedGraph(pts, edges, labels), 1.0, meta)


def clause_satisfied(clause: Sequence[int], assignment: Sequence[bool]) -> bool:
    return any((l > 0) == bool(assignment[abs(l) - 1]) for l in clause)


def max2sat_witness(inst: GadgetInstance, assignment: Sequence[bool], barbs: str = "unsatisfied") -> ImmersedGraph:
    """Canonical simplification: one literal vertex per variable, then per clause the
    2-edge path through its hook, plus the hook->barb edge for the clauses selected by
    `barbs` ("unsatisfied", "none" or "all"). Partner variables of unary clauses are False."""
    if barbs not in ("unsatisfied", "none", "all"):
        raise ValueError("barbs must be 'unsatisfied', 'none' or 'all'")
    g = inst.graph
    var_ids = {int(v): ids for v, ids in inst.meta["variableIds"].items()}
    n0 = inst.meta["params"]["numVars"]
    if len(assignment) < n0:
        raise ValueError(f"assignment covers {len(assignment)} of {n0} variables")
    values = {v: (bool(assignment[v - 1]) if v <= n0 else False) for v in var_ids}
    chosen = {v: ids[0] if values[v] else ids[1] for v, ids in var_ids.items()}
    V = set(chosen.values())
    E = []
    for ci, gad in enumerate(inst.meta["gadgets"]):
        h = gad["hook"]
        V.add(h)
        for v in gad["variables"]:
            E.append((chosen[v], h))
        unsat = not clause_satisfied(gad["clause"], [values[v] for v in sorted(values)])
        if barbs == "all" or (barbs == "unsatisfied" and unsat):
            V.add(gad["barb"])
            E.append((h, gad["barb"]))
    return ImmersedGraph({v: g.points[v] for v in sorted(V)}, E, {v: g.labels.get(v, "") for v in V})


def clause_tree(inst: GadgetInstance, ci: int) -> RootedTree:
    """Clause gadget ci as a tree rooted at its hook (the four literal vertices included)."""
    g = inst.graph
    gad = inst.meta["gadgets"][ci]
    var_ids = {int(v): ids for v, ids in inst.meta["variableIds"].items()}
    lits = [vid for v in gad["variables"] for vid in var_ids[v]]
    V = [gad["hook"], gad["barb"]] + gad["spokes"] + lits
    E = [(gad["hook"], gad["barb"])]
    for uid, vid in zip(gad["spokes"], lits):
        E += [(uid, gad["hook"]), (uid, vid)]
    return RootedTree({v: g.points[v] for v in V}, E, gad["hook"])


def verify_max2sat_witness(inst: GadgetInstance, W: ImmersedGraph, delta: Optional[float] = None) -> bool:
    """Graph distance from the gadget graph to W at most delta, with every literal vertex
    pinned to the chosen vertex of its variable. The clause gadgets only share literal
    vertices, so pinned per-clause tree decisions combine into one mapping."""
    delta = inst.delta if delta is None else delta
    var_ids = {int(v): ids for v, ids in inst.meta["variableIds"].items()}
    pins = {}
    for v, ids in var_ids.items():
        present = [i for i in ids if i in W.points]
        if len(present) != 1:
            return False
        pins[ids[0]] = pins[ids[1]] = present[0]
    for ci in range(len(inst.meta["gadgets"])):
        T = clause_tree(inst, ci)
        local = {v: w for v, w in pins.items() if v in T.points}
        if not decide_graph_distance_tree_to_graph(T, W, delta, "strong", pins=local):
            return False
    return True


# ---------------------------------------------------------------------------
# subset sum -> loop-zone chain


def loop_height(a: float, delta: float) -> float:
    """Depth between the two loop-zone stops that shifts the landing point by a."""
    if not 0 < a < delta / 2:
        raise ValueError("loop height needs 0 < a < delta/2")
    return a * delta / (delta / 2 - a)


SHAPES = ("curve", "tree", "graph")
EDGES_PER_GADGET = {"curve": 2, "tree": 3, "graph": 5}


def gen_subset_sum_instance(A: Sequence[int], B: int, shape: str = "tree") -> GadgetInstance:
    """Chain of one loop-zone gadget per element plus a closing gadget carrying B.

    delta = sum(A) + 1. Element values are encoded as lengths sigma * a with
    sigma = min(1, delta / (5 sum(A))), which keeps every loop height below delta.
    Gadget i lives at x = i * delta: top line y = delta, loop stops U_i = (x, -delta) and
    L_i = (x, -delta - h_i) joined by an overlaid path U -> L -> U', zigzag edge through
    z_i = (x + delta/2, 0) from y = -delta to y = delta. A link from U_i through z_i lands
    at x + delta; from L_i it lands a_i further left. Tree shape hangs a pendant of length
    1.5 delta below each loop; graph shape hangs a triangle of diameter 1.5 delta instead.
    """
    if shape not in SHAPES:
        raise ValueError(f"shape must be one of {SHAPES}")
    A = [int(a) for a in A]
    if not A or any(a <= 0 for a in A) or int(B) <= 0:
        raise ValueError("A needs positive integers and B must be positive")
    B = int(B)
    total = sum(A)
    delta = float(total + 1)
    sigma = min(1.0, delta / (5 * total))
    enc = [sigma * a for a in A]
    heights = [loop_height(e, delta) for e in enc]
    pts: dict[int, Point] = {}
    labels: dict[int, str] = {}
    path: list[int] = []
    edges: list[tuple[int, int]] = []
    gadgets = []
    nid = 0

    def add(p, label):
        nonlocal nid
        pts[nid] = Point(*p)
        labels[nid] = label
        nid += 1
        return nid - 1

    n = len(A)
    for i in range(n + 1):
        x = i * delta
        closing = i == n
        rec = {"index": i, "x": x}
        if i == 0:
            path.append(add((x, delta), "s0"))
        rec["top"] = path[-1]
        U = add((x, -delta), f"U{i}")
        path.append(U)
        rec["U"] = U
        if not closing:
            Lo = add((x, -delta - heights[i]), f"L{i}")
            U2 = add((x, -delta), f"U{i}'")
            path += [Lo, U2]
            rec["L"] = Lo
        bottom = rec.get("L", U)
        zlo = add((x + delta / 2, -delta), f"zlo{i}")
        zhi = add((x + delta / 2, delta), f"zhi{i}")
        path += [zlo, zhi]
        rec["zigzag"] = [zlo, zhi]
        if closing:
            r = add((x + delta - sigma * B, delta), "r")
            e = add((x + delta, delta), "end")
            path += [r, e]
            rec["landingEdge"] = [r, e]
        else:
            nxt = add((x + delta, delta), f"s{i + 1}")
            path.append(nxt)
            rec["landingEdge"] = [zhi, nxt]
        if shape == "tree":
            p = add((x, pts[bottom].y - 1.5 * delta), f"pend{i}")
            edges.append((bottom, p))
            rec["hang"] = [p]
        elif shape == "graph":
            q1 = add((x - 0.75 * delta, pts[bottom].y - 1.3 * delta), f"loopA{i}")
            q2 = add((x + 0.75 * delta, pts[bottom].y - 1.3 * delta), f"loopB{i}")
            edges += [(bottom, q1), (q1, q2), (q2, bottom)]
            rec["hang"] = [q1, q2]
        gadgets.append(rec)
    edges += list(zip(path, path[1:]))
    reachable = subset_sum(A, B)
    per = EDGES_PER_GADGET[shape]
    meta = {
        "reduction": SUBSET_SUM,
        "theorem": "edge-restricted min-edge simplification of curves, trees and graphs is weakly NP-hard",
        "params": {"A": A, "B": B, "shape": shape},
        "sigma": sigma,
        "encoded": enc,
        "loopHeights": heights,
        "path": path,
        "gadgets": gadgets,
        "reachable": reachable,
        "edgeBudget": per * (n + 1),
        "expectedRelation": f"subset of A summing to B <=> simplification with at most {per}(n+1) edges, n = |A|",
    }
    if shape == "curve":
        g = ImmersedGraph(pts, edges, labels)
    else:
        g = RootedTree(pts, edges, path[0], labels) if shape == "tree" else ImmersedGraph(pts, edges, labels)
    return GadgetInstance(g, delta, meta)


def subset_sum_witness(inst: GadgetInstance, subset: Sequence[int]) -> ImmersedGraph:
    """Canonical edge-restricted simplification for a subset (indices into A) summing to B.

    Per element gadget: a link down to L_i (element chosen) or U_i (not chosen), then a link
    through the zigzag midpoint to the landing edge. The closing gadget links down to U and up
    to the end. Hung parts get one pendant link (tree) or a copied triangle (graph).
    """
    if not inst.meta["reachable"]:
        raise ValueError("B is not a subset sum of A; no canonical witness")
    A = inst.meta["params"]["A"]
    chosen = set(int(i) for i in subset)
    if sum(A[i] for i in chosen) != inst.meta["params"]["B"]:
        raise ValueError("subset does not sum to B")
    g = inst.graph
    delta = inst.delta
    shape = inst.meta["params"]["shape"]
    pts: dict[int, Point] = {}
    edges = []
    seq = [inst.meta["path"][0]]
    pts[seq[0]] = g.points[seq[0]]
    extra = max(g.points) + 1
    for rec in inst.meta["gadgets"]:
        i = rec["index"]
        stop = rec["L"] if (i in chosen and "L" in rec) else rec["U"]
        pts[stop] = g.points[stop]
        seq.append(stop)
        if i < len(A):
            land_x = rec["x"] + delta - (inst.meta["encoded"][i] if i in chosen else 0.0)
            land = Point(land_x, delta)
            nxt = rec["landingEdge"][1]
            if abs(land_x - g.points[nxt].x) < 1e-12:
                vid = nxt
            else:
                vid = extra
                extra += 1
            pts[vid] = land
        else:
            vid = rec["landingEdge"][1]
            pts[vid] = g.points[vid]
        seq.append(vid)
        for h in rec.get("hang", []):
            pts[h] = g.points[h]
        if shape == "tree":
            edges.append((stop, rec["hang"][0]))
        elif shape == "graph":
            q1, q2 = rec["hang"]
            edges += [(stop, q1), (q1, q2), (q2, stop)]
    edges += list(zip(seq, seq[1:]))
    meta = {"sequence": seq}
    if shape == "tree":
        return RootedTree(pts, edges, seq[0], meta=meta)
    return ImmersedGraph(pts, edges, meta=meta)


def verify_subset_sum_witness(inst: GadgetInstance, W: ImmersedGraph, delta: Optional[float] = None) -> bool:
    """Curve: strong Fréchet. Tree: graph distance decision. Graph: each hung triangle edge
    q1-q2 is split off and matched to the identical witness edge, the remaining tree is decided
    with the triangle corners pinned to themselves."""
    delta = inst.delta if delta is None else delta
    shape = inst.meta["params"]["shape"]
    g = inst.graph
    if shape == "curve":
        P = Polyline([g.points[v] for v in inst.meta["path"]])
        Q = Polyline([W.points[v] for v in W.meta["sequence"]])
        return decide_frechet(P, Q, delta, "strong")
    if shape == "tree":
        return decide_graph_distance_tree_to_graph(g, W, delta, "strong")
    cut = [tuple(rec["hang"]) for rec in inst.meta["gadgets"]]
    cut_keys = {tuple(sorted(e)) for e in cut}
    keep = [e for e in g.edges if tuple(sorted(e)) not in cut_keys]
    T = RootedTree(g.points, keep, inst.meta["path"][0])
    pins = {}
    for q1, q2 in cut:
        if not W.has_edge(q1, q2):
            return False
        pins[q1], pins[q2] = q1, q2
    return decide_graph_distance_tree_to_graph(T, W, delta, "strong", pins=pins)


# ---------------------------------------------------------------------------
# small illustration instance


def free_space_figure_instance() -> tuple[RootedTree, ImmersedGraph, float]:
    """One tree edge over a zigzag graph with a side branch; six elementary intervals at delta 0.8."""
    T = RootedTree({0: Point(0.0, 0.0), 1: Point(3.0, 0.0)}, [(0, 1)], 0, {0: "u", 1: "v"})
    H = ImmersedGraph(
        {
            0: Point(-0.9, 0.5), 1: Point(0.3, -0.4), 2: Point(1.5, 0.5), 3: Point(2.6, -0.4),
            4: Point(3.4, 0.5), 5: Point(3.0, 1.6), 6: Point(-0.5, -0.9),
        },
        [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (1, 6)],
    )
    return T, H, 0.8
