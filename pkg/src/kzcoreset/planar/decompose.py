"""Cover of a planar graph by pieces bounded by a few shortest paths.

The triangulated graph's shortest-path tree ``T`` and the dual tree ``T*``
interdigitate.  Cutting ``T*`` with :func:`tree_partition` (marked nodes =
faces touching ``S``) gives groups of faces; each group's vertices form a
piece, and each cut dual edge closes a fundamental cycle of ``T`` made of two
root-ward shortest paths that together fence the piece off.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError
from ..metric import GraphMetric
from .graph import PlanarGraph
from .trees import DualTree, ShortestPathTree, TreePartitionResult, build_interdigitating_trees, tree_partition


@dataclass
class PlanarDecomposition:
    graph: PlanarGraph
    triangulated: PlanarGraph
    S: list[int]
    parts: list[list[int]]
    paths: list[list[list[int]]]
    root: int
    tree: ShortestPathTree | None = None
    dual: DualTree | None = None
    partition: TreePartitionResult | None = None
    R: list[int] = field(default_factory=list)
    part_faces: list[list[int]] = field(default_factory=list)

    def path_length(self, path) -> float:
        """Length along tree edges (the path runs down from its first vertex)."""
        if self.tree is None or len(path) < 2:
            return 0.0
        w = [self.triangulated.edges[int(self.tree.parent_edge[v])][2] for v in path[1:]]
        return float(sum(w))

    def to_dict(self):
        return {
            "parts": [list(map(int, p)) for p in self.parts],
            "separator_paths": [[list(map(int, q)) for q in ps] for ps in self.paths],
            "provenance": {
                "root": int(self.root),
                "terminals": list(map(int, self.S)),
                "n_vertices": self.graph.n,
                "n_edges": self.graph.m,
                "chords_added": self.triangulated.m - self.graph.m,
                "n_faces": len(self.triangulated.faces()),
                "marked_faces": list(map(int, self.R)),
                "part_faces": [list(map(int, f)) for f in self.part_faces],
                "dual_tree_edges": [] if self.dual is None else [[int(a), int(b)] for a, b, _ in self.dual.edges],
            },
        }


def decompose(G: PlanarGraph, S, root: int = 0) -> PlanarDecomposition:
    S = sorted({int(s) for s in S})
    for s in S:
        if not 0 <= s < G.n:
            raise DomainError(f"terminal {s} outside 0..{G.n - 1}")
    G.validate()
    tri = G.triangulate()
    if G.n <= 2:
        return PlanarDecomposition(G, tri, S, [list(range(G.n))], [[]], root)
    T, D = build_interdigitating_trees(tri, root)
    Sset = set(S)
    faces = tri.faces()
    R = [f for f in range(len(faces)) if Sset.intersection(tri.face_vertices(f))]
    part = tree_partition(D.n_faces, D.edges, R)
    parts, paths = [], []
    for group, bnd in zip(part.parts, part.boundary):
        verts = sorted({v for f in group for v in tri.face_vertices(f)})
        ps: list[list[int]] = []
        for i in bnd:
            u, v, _ = tri.edges[D.edges[i][2]]
            a = T.lca(u, v)
            for end in (u, v):
                p = T.path_from_ancestor(a, end)
                if p not in ps:
                    ps.append(p)
        parts.append(verts)
        paths.append(ps)
    return PlanarDecomposition(G, tri, S, parts, paths, root, T, D, part, R, [list(g) for g in part.parts])


def _reachable(adj, start, blocked) -> set[int]:
    seen = set(start)
    q = deque(start)
    while q:
        u = q.popleft()
        for v, _ in adj[u]:
            if v not in seen and v not in blocked:
                seen.add(v)
                q.append(v)
    return seen


def check_decomposition(dec: PlanarDecomposition, metric: GraphMetric | None = None,
                        rel_tol: float = 1e-9) -> dict[str, bool]:
    """Run every structural invariant; returns name -> pass flag."""
    G = dec.graph
    metric = metric or G.metric()
    n = G.n
    out = {}
    out["cover"] = set().union(*map(set, dec.parts)) == set(range(n))
    out["paths_le_8"] = all(len(ps) <= 8 for ps in dec.paths)

    short = True
    for ps in dec.paths:
        for p in ps:
            d = metric.distance(p[0], p[-1])
            L = dec.path_length(p)
            if abs(L - d) > rel_tol * max(d, 1.0):
                short = False
            # every step must be an original edge
            for a, b in zip(p, p[1:]):
                e = int(dec.tree.parent_edge[b])
                if e >= G.m or {a, b} != set(dec.triangulated.edges[e][:2]):
                    short = False
    out["paths_shortest"] = short

    adj = dec.triangulated.adjacency()
    sep = True
    for verts, ps in zip(dec.parts, dec.paths):
        P = {v for p in ps for v in p}
        inside = [v for v in verts if v not in P]
        outside = set(range(n)) - set(verts) - P
        if inside and outside and _reachable(adj, inside, P) & outside:
            sep = False
    out["disconnection"] = sep

    Sset = set(dec.S)
    out["terminals_le_9"] = all(len(Sset.intersection(v)) <= 9 for v in dec.parts)
    if dec.partition is not None:
        tp = dec.partition.check(dec.dual.n_faces, dec.R)
        out["tree_partition_cover"] = tp["disjoint_cover"]
        out["tree_partition_boundary_le_4"] = tp["boundary_le_4"]
        out["tree_partition_marked_le_3"] = tp["r_nodes_le_3"]
        out["dual_spanning_tree"] = dec.dual.is_spanning_tree()
        out["trees_partition_edges"] = (len(dec.tree.edge_set) + len(dec.dual.edges) == dec.triangulated.m)
    return out


def triangulation_preserves_distances(G: PlanarGraph, rel_tol: float = 0.0) -> bool:
    before = G.metric().pairwise(np.arange(G.n))
    after = G.triangulate().metric().pairwise(np.arange(G.n))
    return bool(np.all(np.abs(before - after) <= rel_tol * np.maximum(before, 1.0)))
