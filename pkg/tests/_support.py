"""Random instance builders shared by the test modules."""

import random

from mcgs.frechet import Polyline
from mcgs.graph import RootedTree


def random_tree(rng: random.Random, n: int, side: float = 1.0) -> RootedTree:
    """Uniform points in [0, side]^2, each vertex attached to a random earlier one."""
    pts = {i: (rng.uniform(0, side), rng.uniform(0, side)) for i in range(n)}
    return RootedTree(pts, [(rng.randrange(i), i) for i in range(1, n)], 0)


def walk_tree(rng: random.Random, n: int, step: float = 0.1) -> RootedTree:
    """A tree drifting rightwards: parents are mostly recent vertices, so branches stay local."""
    pts = {0: (0.0, 0.0)}
    edges = []
    for i in range(1, n):
        parent = rng.randrange(max(0, i - 3), i) if rng.random() < 0.8 else rng.randrange(i)
        x, y = pts[parent]
        pts[i] = (x + rng.uniform(0, 2 * step), y + rng.uniform(-step, step))
        edges.append((parent, i))
    return RootedTree(pts, edges, 0)


def random_polyline(rng: random.Random, max_vertices: int = 6, side: float = 1.0) -> Polyline:
    k = rng.randint(2, max_vertices)
    return Polyline([(rng.uniform(0, side), rng.uniform(0, side)) for _ in range(k)])


def random_points(rng: random.Random, n: int, side: float = 2.5) -> list:
    return [(round(rng.uniform(0, side), 3), round(rng.uniform(0, side), 3)) for _ in range(n)]


def tree_leaves(T: RootedTree) -> list:
    return [v for v in T.points if v != T.root and not T.children[v]]
