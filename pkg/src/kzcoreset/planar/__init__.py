"""Planar separator machinery: triangulation, interdigitating trees,
shortest-path separators and portal-based distance evaluators."""

from .decompose import PlanarDecomposition, check_decomposition, decompose, triangulation_preserves_distances
from .graph import PlanarGraph
from .portals import (
    PortalStructure,
    SeparatorMetric,
    SeparatorPath,
    approx_distance_through_path,
    PathSweep,
    build_portals,
    decomposition_paths,
    exact_through_path,
    separator_metric,
    sweep_path,
    through_path_full,
)
from .trees import (
    DualTree,
    ShortestPathTree,
    TreePartitionResult,
    build_interdigitating_trees,
    dual_tree,
    shortest_path_tree,
    tree_partition,
)

__all__ = [
    "PlanarDecomposition", "check_decomposition", "decompose", "triangulation_preserves_distances",
    "PlanarGraph", "PortalStructure", "SeparatorMetric", "SeparatorPath",
    "approx_distance_through_path", "build_portals", "exact_through_path", "separator_metric",
    "through_path_full", "PathSweep", "decomposition_paths", "sweep_path", "DualTree", "ShortestPathTree", "TreePartitionResult",
    "build_interdigitating_trees", "dual_tree", "shortest_path_tree", "tree_partition",
]
