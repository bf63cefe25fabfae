"""Minimum-complexity simplification of trees and graphs under Fréchet-type distances."""

from .frechet import Polyline, decide_frechet, frechet_value
from .freespace import (
    compute_slices,
    decide_graph_distance_tree_to_graph,
    decide_traversal_distance,
    prune_graph,
)
from .gcs import ExactPoint, OnInterval, gamma, simplify_curve_min_vertex
from .geom import Interval, Point, Segment
from .graph import (
    ImmersedGraph,
    RootedTree,
    as_rooted,
    build_shortcut_graph,
    load_graph,
    mapping_subtree,
    save_graph,
)
from .leaf_restricted import simplify_leaf_restricted
from .render import render_svg
from .result import AlphaCapExceeded, Infeasible, SimplificationResult, VerificationError
from .vertex_restricted import simplify_vertex_restricted

__all__ = [
    "AlphaCapExceeded",
    "ExactPoint",
    "ImmersedGraph",
    "Infeasible",
    "Interval",
    "OnInterval",
    "Point",
    "Polyline",
    "RootedTree",
    "Segment",
    "SimplificationResult",
    "VerificationError",
    "build_shortcut_graph",
    "compute_slices",
    "as_rooted",
    "decide_frechet",
    "decide_graph_distance_tree_to_graph",
    "decide_traversal_distance",
    "frechet_value",
    "gamma",
    "load_graph",
    "mapping_subtree",
    "prune_graph",
    "render_svg",
    "save_graph",
    "simplify_curve_min_vertex",
    "simplify_leaf_restricted",
    "simplify_vertex_restricted",
]
