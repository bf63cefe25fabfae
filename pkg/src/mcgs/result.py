"""Result type shared by both simplification algorithms and the oracles."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graph import ImmersedGraph, RootedTree


class Infeasible(Exception):
    """No simplification satisfies the constraints (distinct from an internal error)."""


class AlphaCapExceeded(RuntimeError):
    def __init__(self, alpha: int, cap: int):
        super().__init__(f"slice size alpha={alpha} exceeds the configured cap {cap}")
        self.alpha = alpha
        self.cap = cap


class VerificationError(RuntimeError):
    """An extracted simplification failed its own re-verification."""

    def __init__(self, message: str, dump: Optional[dict] = None):
        super().__init__(message)
        self.dump = dump or {}


@dataclass
class SimplificationResult:
    tree: ImmersedGraph
    paper_cost: Optional[float] = None
    certificate: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    @property
    def vertex_count(self) -> int:
        return len(self.tree.points)

    @property
    def edge_count(self) -> int:
        return self.tree.num_edges()

    @property
    def complexity(self) -> int:
        return self.vertex_count + self.edge_count

    def report(self) -> dict:
        out = {
            "vertexCount": self.vertex_count,
            "edgeCount": self.edge_count,
            "complexity": self.complexity,
            "paperCost": self.paper_cost,
        }
        out.update(self.stats)
        return out


def subtree_of(T: ImmersedGraph, vertices, edges, root: Optional[int] = None, meta: Optional[dict] = None) -> RootedTree:
    """Build the output tree on a subset of T's vertex ids (labels carried over)."""
    vertices = sorted(vertices)
    pts = {v: T.points[v] for v in vertices}
    labels = {v: s for v, s in T.labels.items() if v in pts}
    if root is None:
        root = vertices[0]
    return RootedTree(pts, sorted(edges), root, labels, meta)
