"""Immersed graphs, rooted trees, shortcut graphs, mapping/ancestor subtrees and JSON I/O."""

from __future__ import annotations

import json
import math
from collections import deque
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .geom import Point, Segment


class GraphError(ValueError):
    code = "GraphError"


class MalformedInput(GraphError):
    code = "MalformedInput"


class DanglingEdge(GraphError):
    code = "DanglingEdge"


class DuplicateEdge(GraphError):
    code = "DuplicateEdge"


class DuplicateVertex(GraphError):
    code = "DuplicateVertex"


class SelfLoop(GraphError):
    code = "SelfLoop"


class NotATree(GraphError):
    code = "NotATree"


class InvalidLeafSet(GraphError):
    code = "InvalidLeafSet"


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class ImmersedGraph:
    """Simple straight-line graph in the plane. Vertex identity is the integer id, never the position."""

    def __init__(
        self,
        vertices: Mapping[int, Sequence[float]],
        edges: Iterable[Sequence[int]] = (),
        labels: Optional[Mapping[int, str]] = None,
        meta: Optional[dict] = None,
    ):
        self.points: dict[int, Point] = {}
        for vid, p in vertices.items():
            if not isinstance(vid, int) or isinstance(vid, bool):
                raise MalformedInput(f"vertex id {vid!r} is not an integer")
            pt = p if isinstance(p, Point) else Point(float(p[0]), float(p[1]))
            if not pt.is_finite():
                raise MalformedInput(f"vertex {vid} has non-finite coordinates")
            self.points[vid] = pt
        self.adj: dict[int, list[int]] = {v: [] for v in self.points}
        keys: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        for e in edges:
            if len(e) != 2:
                raise MalformedInput(f"edge {e!r} must have two endpoints")
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise SelfLoop(f"edge [{u}, {v}] is a self-loop")
            if u not in self.points or v not in self.points:
                raise DanglingEdge(f"edge [{u}, {v}] references a missing vertex")
            k = edge_key(u, v)
            if k in seen:
                raise DuplicateEdge(f"edge [{u}, {v}] appears twice")
            seen.add(k)
            keys.append(k)
            self.adj[u].append(v)
            self.adj[v].append(u)
        self.edges: list[tuple[int, int]] = sorted(keys)
        self.edge_index: dict[tuple[int, int], int] = {k: i for i, k in enumerate(self.edges)}
        for nbrs in self.adj.values():
            nbrs.sort()
        self.labels: dict[int, str] = dict(labels or {})
        self.meta: dict = dict(meta or {})

    @property
    def vertex_ids(self) -> list[int]:
        return list(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def num_edges(self) -> int:
        return len(self.edges)

    def complexity(self) -> int:
        return len(self.points) + len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edge_index

    def segment(self, u: int, v: int) -> Segment:
        return Segment(self.points[u], self.points[v])

    def edge_segment(self, index: int) -> Segment:
        u, v = self.edges[index]
        return Segment(self.points[u], self.points[v])

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def is_connected(self) -> bool:
        if not self.points:
            return True
        start = next(iter(self.points))
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.points)

    def is_tree(self) -> bool:
        return len(self.edges) == len(self.points) - 1 and self.is_connected()

    def scaled(self, factor: float) -> "ImmersedGraph":
        pts = {v: Point(p.x * factor, p.y * factor) for v, p in self.points.items()}
        return ImmersedGraph(pts, self.edges, self.labels, self.meta)

    def transformed(self, fn) -> "ImmersedGraph":
        return ImmersedGraph({v: fn(p) for v, p in self.points.items()}, self.edges, self.labels, self.meta)

    def same_as(self, other: "ImmersedGraph") -> bool:
        return (
            type(self) is type(other)
            and self.points == other.points
            and self.edges == other.edges
            and self.labels == other.labels
            and self.meta == other.meta
            and getattr(self, "root", None) == getattr(other, "root", None)
            and getattr(self, "declared_leaves", None) == getattr(other, "declared_leaves", None)
        )

    def __repr__(self) -> str:
        return f"{type(self).__name__}(|V|={len(self.points)}, |E|={len(self.edges)})"


class RootedTree(ImmersedGraph):
    """A tree with a designated root and derived parent/children structure."""

    def __init__(
        self,
        vertices: Mapping[int, Sequence[float]],
        edges: Iterable[Sequence[int]],
        root: int,
        labels: Optional[Mapping[int, str]] = None,
        meta: Optional[dict] = None,
        declared_leaves: Optional[Sequence[int]] = None,
    ):
        super().__init__(vertices, edges, labels, meta)
        if root not in self.points:
            raise NotATree(f"root {root} is not a vertex")
        if not self.is_tree():
            raise NotATree("graph is not a tree (needs to be connected with |E| = |V| - 1)")
        self.root = root
        self.parent: dict[int, Optional[int]] = {root: None}
        self.children: dict[int, list[int]] = {v: [] for v in self.points}
        self.order: list[int] = [root]
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if w not in self.parent:
                    self.parent[w] = u
                    self.children[u].append(w)
                    self.order.append(w)
                    queue.append(w)
        self.leaves: list[int] = [v for v in self.order if v != root and not self.children[v]]
        self.declared_leaves: Optional[list[int]] = list(declared_leaves) if declared_leaves is not None else None

    @classmethod
    def from_graph(cls, g: ImmersedGraph, root: int, declared_leaves=None) -> "RootedTree":
        return cls(g.points, g.edges, root, g.labels, g.meta, declared_leaves)

    def tree_edges(self) -> list[tuple[int, int]]:
        """(parent, child) pairs in BFS order of the child."""
        return [(self.parent[v], v) for v in self.order if v != self.root]

    def path_to_root(self, v: int) -> list[int]:
        path = [v]
        while self.parent[path[-1]] is not None:
            path.append(self.parent[path[-1]])
        return path

    def subtree_vertices(self, v: int) -> list[int]:
        out, stack = [], [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self.children[u])
        return out

    def postorder(self) -> list[int]:
        return self.order[::-1]

    def scaled(self, factor: float) -> "RootedTree":
        pts = {v: Point(p.x * factor, p.y * factor) for v, p in self.points.items()}
        return RootedTree(pts, self.edges, self.root, self.labels, self.meta, self.declared_leaves)

    def transformed(self, fn) -> "RootedTree":
        pts = {v: fn(p) for v, p in self.points.items()}
        return RootedTree(pts, self.edges, self.root, self.labels, self.meta, self.declared_leaves)


def check_leaf_set(T: RootedTree, leaves: Sequence[int]) -> list[int]:
    leaves = list(leaves)
    if not leaves:
        raise InvalidLeafSet("leaf set must be nonempty")
    if len(set(leaves)) != len(leaves):
        raise InvalidLeafSet("leaf ids must be distinct")
    leafset = set(T.leaves)
    for v in leaves:
        if v not in leafset:
            raise InvalidLeafSet(f"vertex {v} is not a leaf of the tree")
    return leaves


def build_shortcut_graph(T: ImmersedGraph) -> ImmersedGraph:
    """Complete straight-line graph on the vertices of T (coincident points give zero-length edges)."""
    ids = sorted(T.points)
    return ImmersedGraph(T.points, combinations(ids, 2), T.labels)


def mapping_subtree(T: RootedTree, leaves: Sequence[int]) -> RootedTree:
    """Union of the root-to-leaf paths of the chosen leaves."""
    leaves = check_leaf_set(T, leaves)
    keep: set[int] = set()
    for leaf in leaves:
        keep.update(T.path_to_root(leaf))
    pts = {v: T.points[v] for v in T.points if v in keep}
    edges = [(T.parent[v], v) for v in T.order if v in keep and v != T.root]
    labels = {v: s for v, s in T.labels.items() if v in keep}
    return RootedTree(pts, edges, T.root, labels, declared_leaves=leaves)


def ancestor_tree(M: RootedTree, leaves: Sequence[int]) -> RootedTree:
    """Contract M to its root, the chosen leaves and its branching vertices.

    Each kept vertex is joined to its closest kept ancestor; the contracted paths are
    recovered with ancestor_paths.
    """
    leaves = check_leaf_set(M, leaves)
    keep = {M.root, *leaves} | {v for v in M.points if len(M.children[v]) >= 2}
    edges = []
    for v in M.order:
        if v == M.root or v not in keep:
            continue
        a = M.parent[v]
        while a not in keep:
            a = M.parent[a]
        edges.append((a, v))
    pts = {v: M.points[v] for v in M.order if v in keep}
    labels = {v: s for v, s in M.labels.items() if v in keep}
    return RootedTree(pts, edges, M.root, labels, declared_leaves=leaves)


def ancestor_paths(M: RootedTree, A: RootedTree) -> dict[int, list[int]]:
    """For each non-root vertex v of A, the M-path from its A-parent down to v (inclusive)."""
    out = {}
    for parent, child in A.tree_edges():
        path = [child]
        while path[-1] != parent:
            path.append(M.parent[path[-1]])
        out[child] = path[::-1]
    return out


# ---------------------------------------------------------------------------
# JSON schema

_KNOWN = {"vertices", "edges", "root", "leaves", "meta"}
_VERTEX_KNOWN = {"id", "x", "y", "label"}


def graph_from_dict(data: dict) -> ImmersedGraph:
    if not isinstance(data, dict):
        raise MalformedInput("top-level JSON value must be an object")
    try:
        raw_vertices = data["vertices"]
        raw_edges = data.get("edges", [])
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"missing field: {exc}") from None
    if not isinstance(raw_vertices, list) or not isinstance(raw_edges, list):
        raise MalformedInput("'vertices' and 'edges' must be arrays")
    meta = data.get("meta", {})
    if not isinstance(meta, dict):
        raise MalformedInput("'meta' must be an object")
    meta = dict(meta)
    unknown = {k: v for k, v in data.items() if k not in _KNOWN}
    if unknown:
        meta.setdefault("unknownFields", {}).update(unknown)
    points, labels, extras = {}, {}, {}
    for rv in raw_vertices:
        try:
            vid = rv["id"]
            x, y = float(rv["x"]), float(rv["y"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad vertex record {rv!r}: {exc}") from None
        if not isinstance(vid, int) or isinstance(vid, bool):
            raise MalformedInput(f"vertex id {vid!r} is not an integer")
        if vid in points:
            raise DuplicateVertex(f"vertex id {vid} appears twice")
        if not (math.isfinite(x) and math.isfinite(y)):
            raise MalformedInput(f"vertex {vid} has non-finite coordinates")
        points[vid] = Point(x, y)
        if rv.get("label") is not None:
            labels[vid] = str(rv["label"])
        extra = {k: v for k, v in rv.items() if k not in _VERTEX_KNOWN}
        if extra:
            extras[str(vid)] = extra
    if extras:
        meta.setdefault("unknownVertexFields", {}).update(extras)
    edges = []
    for e in raw_edges:
        if not isinstance(e, list) or len(e) != 2 or not all(isinstance(i, int) and not isinstance(i, bool) for i in e):
            raise MalformedInput(f"edge {e!r} must be a pair of integer ids")
        edges.append(tuple(e))
    leaves = data.get("leaves")
    if leaves is not None and (not isinstance(leaves, list) or not all(isinstance(i, int) for i in leaves)):
        raise MalformedInput("'leaves' must be an array of integer ids")
    if data.get("root") is not None:
        root = data["root"]
        if not isinstance(root, int) or isinstance(root, bool):
            raise MalformedInput("'root' must be an integer id")
        return RootedTree(points, edges, root, labels, meta, leaves)
    g = ImmersedGraph(points, edges, labels, meta)
    if leaves is not None:
        g.meta.setdefault("leaves", leaves)
    return g


def graph_to_dict(g: ImmersedGraph) -> dict:
    vertices = []
    for vid, p in g.points.items():
        rec = {"id": vid, "x": p.x, "y": p.y}
        if vid in g.labels:
            rec["label"] = g.labels[vid]
        vertices.append(rec)
    out = {"vertices": vertices, "edges": [list(e) for e in g.edges]}
    if isinstance(g, RootedTree):
        out["root"] = g.root
        if g.declared_leaves is not None:
            out["leaves"] = list(g.declared_leaves)
    if g.meta:
        out["meta"] = g.meta
    return out


def loads_graph(text: str) -> ImmersedGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from None
    return graph_from_dict(data)


def dumps_graph(g: ImmersedGraph) -> str:
    return json.dumps(graph_to_dict(g), indent=2, ensure_ascii=False) + "\n"


def load_graph(path) -> ImmersedGraph:
    return loads_graph(Path(path).read_text(encoding="utf-8"))


def save_graph(g: ImmersedGraph, path) -> None:
    Path(path).write_text(dumps_graph(g), encoding="utf-8")


def as_rooted(g: ImmersedGraph, root: Optional[int] = None) -> RootedTree:
    """View g as a rooted tree, keeping an existing root unless one is given."""
    if isinstance(g, RootedTree) and (root is None or root == g.root):
        return g
    if root is None:
        root = min(g.points)
    return RootedTree(g.points, g.edges, root, g.labels, g.meta, getattr(g, "declared_leaves", None))
