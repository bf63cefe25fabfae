import random

import pytest

from mcgs.gcs import ExactPoint, simplify_curve_min_vertex
from mcgs.geom import dist
from mcgs.graph import InvalidLeafSet, RootedTree
from mcgs.leaf_restricted import simplify_leaf_restricted, witness_mapping
from mcgs.oracles import brute_force_min_simplification
from mcgs.result import Infeasible

from _support import random_tree, tree_leaves

MODES = ("strong", "weak")


def collinear_path():
    return RootedTree({i: (float(i), 0.0) for i in range(4)}, [(0, 1), (1, 2), (2, 3)], 0)


@pytest.mark.parametrize("mode", MODES)
def test_collinear_single_leaf(mode):
    r = simplify_leaf_restricted(collinear_path(), [3], 0.5, mode)
    assert r.vertex_count == 2 and r.tree.edges == [(0, 3)]


def test_collinear_mapping_is_identity():
    T = collinear_path()
    r = simplify_leaf_restricted(T, [3], 0.5)
    m = witness_mapping(r, T, 0.5)
    assert m["vertices"][0] == T.points[0] and m["vertices"][3] == T.points[3]
    assert all(rec["frechetOk"] for rec in m["edges"].values())


def curve_answer(T, leaf, delta, mode):
    """Fewest vertices of a curve from a vertex near the root to the leaf, over V(T)."""
    P = [T.points[v] for v in reversed(T.path_to_root(leaf))]
    cands = sorted(T.points.items())
    best = None
    for rho, p in T.points.items():
        if rho == leaf or dist(p, T.points[T.root]) > delta:
            continue
        res = simplify_curve_min_vertex(P, delta, mode, cands, ExactPoint(p), ExactPoint(T.points[leaf]))
        if res and (best is None or res.count < best):
            best = res.count
    return best


@pytest.mark.parametrize("seed", range(10))
def test_single_leaf_equals_curve_simplification(seed):
    rng = random.Random(seed)
    T = random_tree(rng, rng.randint(2, 8))
    leaf = rng.choice(tree_leaves(T))
    for delta in (0.1, 0.2, 0.4):
        for mode in MODES:
            try:
                got = simplify_leaf_restricted(T, [leaf], delta, mode).vertex_count
            except Infeasible:
                got = None
            assert got == curve_answer(T, leaf, delta, mode)


@pytest.mark.parametrize("seed", range(6))
def test_leaves_are_pinned_and_edges_verified(seed):
    rng = random.Random(40 + seed)
    T = random_tree(rng, 7)
    lv = tree_leaves(T)
    leaves = sorted(rng.sample(lv, min(2, len(lv))))
    r = simplify_leaf_restricted(T, leaves, 0.4)
    ends = {v for v in r.tree.points if r.tree.degree(v) <= 1}
    assert set(leaves) <= ends
    m = witness_mapping(r, T, 0.4)
    for leaf in leaves:
        assert m["vertices"][leaf] == T.points[leaf]
    assert all(rec["frechetOk"] for rec in m["edges"].values())


@pytest.mark.parametrize("seed", range(5))
def test_small_oracle_agreement(seed):
    rng = random.Random(70 + seed)
    T = random_tree(rng, rng.randint(3, 6))
    lv = tree_leaves(T)
    for k in (1, 2, 3):
        if k > len(lv):
            continue
        leaves = sorted(rng.sample(lv, k))
        for delta in (0.15, 0.3, 0.6):
            try:
                got = simplify_leaf_restricted(T, leaves, delta).vertex_count
            except Infeasible:
                got = None
            try:
                want = brute_force_min_simplification(T, delta, "strong", "leaf", leaves).vertex_count
            except Infeasible:
                want = None
            assert got == want


def test_invalid_leaf_set():
    with pytest.raises(InvalidLeafSet):
        simplify_leaf_restricted(collinear_path(), [1], 0.5)


def test_pin_root_keeps_the_root():
    T = collinear_path()
    r = simplify_leaf_restricted(T, [3], 1.5, pin_root=True)
    assert 0 in r.tree.points
