import json

import pytest

from mcgs.graph import (
    DanglingEdge,
    DuplicateEdge,
    DuplicateVertex,
    ImmersedGraph,
    InvalidLeafSet,
    MalformedInput,
    NotATree,
    RootedTree,
    SelfLoop,
    ancestor_paths,
    ancestor_tree,
    build_shortcut_graph,
    check_leaf_set,
    graph_from_dict,
    graph_to_dict,
    load_graph,
    loads_graph,
    mapping_subtree,
    save_graph,
)


def path_tree(n):
    return RootedTree({i: (float(i), 0.0) for i in range(n)}, [(i, i + 1) for i in range(n - 1)], 0)


def binary_tree():
    pts = {0: (0, 0), 1: (-2, -1), 2: (2, -1), 3: (-3, -2), 4: (-1, -2), 5: (1, -2), 6: (3, -2)}
    return RootedTree(pts, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)], 0)


@pytest.mark.parametrize("n,expected", [(1, 0), (3, 3), (5, 10)])
def test_shortcut_graph_is_complete(n, expected):
    assert build_shortcut_graph(path_tree(n)).num_edges() == expected


def test_mapping_subtree_single_leaf():
    T = binary_tree()
    M = mapping_subtree(T, [4])
    assert sorted(M.points) == [0, 1, 4]


def test_mapping_subtree_all_leaves_is_whole_tree():
    T = binary_tree()
    M = mapping_subtree(T, T.leaves)
    assert sorted(M.edges) == sorted(T.edges)


def test_mapping_subtree_branch_choice():
    # a path 0-1-2 that forks at 2 into 3 and 4
    T = RootedTree({0: (0, 0), 1: (1, 0), 2: (2, 0), 3: (3, 1), 4: (3, -1)}, [(0, 1), (1, 2), (2, 3), (2, 4)], 0)
    assert sorted(mapping_subtree(T, [3, 4]).edges) == sorted(T.edges)
    assert sorted(mapping_subtree(T, [3]).edges) == [(0, 1), (1, 2), (2, 3)]


def test_ancestor_tree_of_path():
    T = path_tree(5)
    A = ancestor_tree(mapping_subtree(T, [4]), [4])
    assert sorted(A.points) == [0, 4] and A.edges == [(0, 4)]
    assert ancestor_paths(T, A) == {4: [0, 1, 2, 3, 4]}


def test_ancestor_tree_binary():
    T = binary_tree()
    A = ancestor_tree(T, T.leaves)
    assert len(A.points) == 7


def test_ancestor_tree_caterpillar():
    # spine 0-1-2, branch vertex 2 carries three leaves
    pts = {0: (0, 0), 1: (1, 0), 2: (2, 0), 3: (3, 1), 4: (3, 0), 5: (3, -1)}
    T = RootedTree(pts, [(0, 1), (1, 2), (2, 3), (2, 4), (2, 5)], 0)
    A = ancestor_tree(T, [3, 4, 5])
    assert sorted(A.edges) == [(0, 2), (2, 3), (2, 4), (2, 5)]


def test_check_leaf_set():
    T = binary_tree()
    assert check_leaf_set(T, [3, 6]) == [3, 6]
    with pytest.raises(InvalidLeafSet):
        check_leaf_set(T, [1])
    with pytest.raises(InvalidLeafSet):
        check_leaf_set(T, [])


def test_round_trip(tmp_path):
    T = RootedTree({0: (0, 0), 1: (1.5, -2.25), 2: (3, 1)}, [(0, 1), (1, 2)], 1, {0: "a"}, {"note": "x"}, [0, 2])
    save_graph(T, tmp_path / "t.json")
    back = load_graph(tmp_path / "t.json")
    assert isinstance(back, RootedTree) and back.root == 1
    assert back.same_as(T) and back.labels == {0: "a"} and back.meta == {"note": "x"}
    assert back.declared_leaves == [0, 2]
    assert graph_to_dict(back) == graph_to_dict(T)


def test_unknown_fields_are_preserved():
    g = graph_from_dict({"vertices": [{"id": 0, "x": 0, "y": 0, "color": "red"}], "edges": [], "extra": 1})
    assert g.meta["unknownFields"] == {"extra": 1}
    assert g.meta["unknownVertexFields"] == {"0": {"color": "red"}}


@pytest.mark.parametrize(
    "data,error",
    [
        ({"vertices": [{"id": 0, "x": 0, "y": 0}], "edges": [[0, 0]]}, SelfLoop),
        ({"vertices": [{"id": 0, "x": 0, "y": 0}], "edges": [[0, 1]]}, DanglingEdge),
        ({"vertices": [{"id": 0, "x": 0, "y": 0}, {"id": 1, "x": 1, "y": 0}], "edges": [[0, 1], [1, 0]]}, DuplicateEdge),
        ({"vertices": [{"id": 0, "x": 0, "y": 0}, {"id": 0, "x": 1, "y": 0}], "edges": []}, DuplicateVertex),
        ({"vertices": [{"id": 0, "x": "nan", "y": 0}], "edges": []}, MalformedInput),
        ({"edges": []}, MalformedInput),
        (
            {
                "vertices": [{"id": i, "x": i, "y": i * i} for i in range(3)],
                "edges": [[0, 1], [1, 2], [0, 2]],
                "root": 0,
            },
            NotATree,
        ),
    ],
)
def test_schema_errors(data, error):
    with pytest.raises(error):
        loads_graph(json.dumps(data))


def test_invalid_json():
    with pytest.raises(MalformedInput):
        loads_graph("{not json")


def test_basic_queries():
    g = ImmersedGraph({0: (0, 0), 1: (1, 0), 2: (5, 5)}, [(1, 0)])
    assert g.edges == [(0, 1)] and g.has_edge(1, 0) and g.degree(2) == 0
    assert not g.is_connected() and g.complexity() == 4
    assert g.scaled(2).points[1] == (2, 0)
