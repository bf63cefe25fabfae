import math
import random

import pytest

from mcgs.freespace import (
    compute_slices,
    decide_graph_distance_tree_to_graph,
    decide_traversal_distance,
    kappa,
    prune_graph,
    slice_alpha,
)
from mcgs.generators import free_space_figure_instance, gen_mdsudg_leaf_instance, mdsudg_leaf_witness
from mcgs.graph import GraphError, ImmersedGraph, RootedTree, build_shortcut_graph
from mcgs.oracles import brute_force_dominating_set, graph_distance_by_paths, spanning_trees

from _support import random_tree


def single_vertex_tree(p=(0.0, 0.0)):
    return RootedTree({0: p}, [], 0)


def test_slice_of_a_crossing_edge():
    H = ImmersedGraph({0: (-2, 0), 1: (2, 0)}, [(0, 1)])
    s = compute_slices(single_vertex_tree(), H, 1)[0]
    assert s.size == 1
    assert s.intervals[0].interval.lo == pytest.approx(0.25)


def test_triangle_inside_the_disk():
    H = ImmersedGraph({0: (0.1, 0), 1: (-0.1, 0.1), 2: (0, -0.1)}, [(0, 1), (1, 2), (0, 2)])
    s = compute_slices(single_vertex_tree(), H, 1)[0]
    assert s.size == 3
    assert all(iv.interval == (0.0, 1.0) for iv in s.intervals)


def test_figure_style_instance_has_six_intervals():
    T, H, delta = free_space_figure_instance()
    slices = compute_slices(T, H, delta)
    assert sum(s.size for s in slices.values()) == 6
    assert [slices[v].size for v in (0, 1)] == [3, 3] and slice_alpha(slices) == 3


def test_slices_need_positive_delta():
    with pytest.raises(ValueError):
        compute_slices(single_vertex_tree(), single_vertex_tree(), 0)


def test_prune_keeps_everything_at_large_delta():
    rng = random.Random(3)
    T = random_tree(rng, 5)
    G = build_shortcut_graph(T)
    pruned = prune_graph(T, G, 10.0)
    for keep in pruned.survivors.values():
        assert keep == set(range(G.num_edges()))


def test_prune_at_tiny_delta_keeps_only_the_tree():
    rng = random.Random(4)
    T = random_tree(rng, 5)
    G = build_shortcut_graph(T)
    pruned = prune_graph(T, G, 1e-6)
    assert {G.edges[k] for k in pruned.union} == set(T.edges)


@pytest.mark.parametrize("mode", ["strong", "weak"])
def test_collinear_path_keeps_long_shortcut(mode):
    T = RootedTree({i: (float(i), 0.0) for i in range(4)}, [(0, 1), (1, 2), (2, 3)], 0)
    G = build_shortcut_graph(T)
    pruned = prune_graph(T, G, 0.5, mode)
    long_edge = G.edge_index[(0, 3)]
    assert all(long_edge in keep for keep in pruned.survivors.values())


def _kappa_setup():
    T = RootedTree({0: (0.0, 0.0), 1: (10.0, 0.0)}, [(0, 1)], 0)
    H = ImmersedGraph({0: (0.0, 0.0), 1: (5.0, 0.4), 2: (10.0, 0.0), 3: (30.0, 30.0), 4: (31.0, 30.0)},
                      [(0, 1), (1, 2), (3, 4)])
    return T, H, 0.5


def test_kappa_counts_one_spine():
    T, H, delta = _kappa_setup()
    slices = compute_slices(T, H, delta)
    P = prune_graph(T, H, delta)
    I = next(iv for iv in slices[0].intervals if H.edges[iv.edge] == (0, 1))
    J = next(iv for iv in slices[1].intervals if H.edges[iv.edge] == (1, 2))
    assert kappa(I, J, (0, 1), P, T) == 1


def test_kappa_same_edge_is_zero():
    T = RootedTree({0: (0.0, 0.0), 1: (4.0, 0.0)}, [(0, 1)], 0)
    H = ImmersedGraph({0: (-1.0, 0.1), 1: (5.0, 0.1)}, [(0, 1)])
    slices = compute_slices(T, H, 0.5)
    P = prune_graph(T, H, 0.5)
    assert kappa(slices[0].intervals[0], slices[1].intervals[0], (0, 1), P, T) == 0


def test_kappa_unreachable_component_is_infinite():
    T = RootedTree({0: (0.0, 0.0), 1: (10.0, 0.0)}, [(0, 1)], 0)
    H = ImmersedGraph({0: (-1.0, 0.0), 1: (1.0, 0.0), 2: (9.0, 0.0), 3: (11.0, 0.0)}, [(0, 1), (2, 3)])
    slices = compute_slices(T, H, 0.5)
    P = prune_graph(T, H, 0.5)
    assert kappa(slices[0].intervals[0], slices[1].intervals[0], (0, 1), P, T) == math.inf


def test_traversal_identity_and_far_edge():
    rng = random.Random(1)
    T = random_tree(rng, 6)
    assert decide_traversal_distance(T, T, 1e-9)
    far = ImmersedGraph({0: (10.0, 10.0), 1: (11.0, 10.0)}, [(0, 1)])
    edge = ImmersedGraph({0: (0.0, 0.0), 1: (1.0, 0.0)}, [(0, 1)])
    assert not decide_traversal_distance(edge, far, 1)


def test_traversal_rejects_disconnected_source():
    g = ImmersedGraph({0: (0, 0), 1: (1, 0), 2: (5, 5)}, [(0, 1)])
    with pytest.raises(GraphError):
        decide_traversal_distance(g, g, 1)


def test_star_instance_against_witnesses():
    P = [(0.0, 0.0), (0.6, 0.2), (3.0, 0.0), (3.5, 0.4)]
    inst = gen_mdsudg_leaf_instance(P)
    k, S = brute_force_dominating_set(P)
    assert k == 2
    assert decide_traversal_distance(inst.graph, mdsudg_leaf_witness(inst, S), 1)
    assert not decide_traversal_distance(inst.graph, mdsudg_leaf_witness(inst, [0, 1]), 1)


def test_graph_distance_identity_and_far_point():
    rng = random.Random(2)
    T = random_tree(rng, 6)
    for delta in (1e-6, 0.1, 1.0):
        assert decide_graph_distance_tree_to_graph(T, T, delta)
    far = ImmersedGraph({0: (50.0, 50.0)})
    assert not decide_graph_distance_tree_to_graph(T, far, 0.5)


def test_graph_distance_against_path_enumeration():
    rng = random.Random(11)
    checked = 0
    for _ in range(40):
        T = random_tree(rng, 5)
        G = build_shortcut_graph(T)
        vs = sorted(rng.sample(sorted(T.points), rng.randint(2, 5)))
        trees = list(spanning_trees(vs))
        edges = trees[rng.randrange(len(trees))]
        H = ImmersedGraph({v: G.points[v] for v in vs}, edges)
        for delta in (0.2, 0.5):
            for mode in ("strong", "weak"):
                assert decide_graph_distance_tree_to_graph(T, H, delta, mode) == graph_distance_by_paths(T, H, delta, mode)
                checked += 1
    assert checked == 160
