"""Shortest-path tree, its interdigitating dual tree, and the partition of a
degree-3 tree into pieces with few boundary edges and few marked nodes."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from .graph import PlanarGraph


@dataclass
class ShortestPathTree:
    root: int
    parent: np.ndarray       # -1 at the root
    parent_edge: np.ndarray  # -1 at the root
    dist: np.ndarray
    depth: np.ndarray

    @property
    def edge_set(self) -> set[int]:
        return {int(e) for e in self.parent_edge if e >= 0}

    def path_from_ancestor(self, a: int, v: int) -> list[int]:
        """Tree path ``a, ..., v``; ``a`` must be an ancestor of ``v``."""
        out = [v]
        while out[-1] != a:
            p = int(self.parent[out[-1]])
            if p < 0:
                raise DomainError(f"{a} is not an ancestor of {v}")
            out.append(p)
        return out[::-1]

    def lca(self, u: int, v: int) -> int:
        while self.depth[u] > self.depth[v]:
            u = int(self.parent[u])
        while self.depth[v] > self.depth[u]:
            v = int(self.parent[v])
        while u != v:
            u, v = int(self.parent[u]), int(self.parent[v])
        return u


def shortest_path_tree(G: PlanarGraph, root: int) -> ShortestPathTree:
    """Dijkstra tree; among tight parents the lowest (vertex, edge) pair wins.

    Parents are only taken from settled vertices, which keeps the tree
    acyclic even when edges have zero weight.
    """
    n = G.n
    if not 0 <= root < n:
        raise DomainError(f"root {root} outside 0..{n - 1}")
    adj = G.adjacency()
    dist = [math.inf] * n
    parent = [-1] * n
    pedge = [-1] * n
    done = [False] * n
    dist[root] = 0.0
    heap = [(0.0, root)]
    settled = []
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        settled.append(u)
        for v, e in adj[u]:
            if done[v]:
                continue
            nd = d + G.edges[e][2]
            if nd < dist[v]:
                dist[v], parent[v], pedge[v] = nd, u, e
                heapq.heappush(heap, (nd, v))
            elif nd == dist[v] and (u, e) < (parent[v], pedge[v]):
                parent[v], pedge[v] = u, e
    if not all(done):
        raise DomainError("graph is disconnected")
    depth = [0] * n
    # every parent was settled before its child
    for v in settled[1:]:
        depth[v] = depth[parent[v]] + 1
    return ShortestPathTree(root, np.array(parent), np.array(pedge), np.array(dist), np.array(depth))


@dataclass
class DualTree:
    n_faces: int
    edges: list[tuple[int, int, int]]  # (face, face, primal edge)

    def adjacency(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n_faces)]
        for i, (a, b, _) in enumerate(self.edges):
            adj[a].append((b, i))
            adj[b].append((a, i))
        return adj

    def is_spanning_tree(self) -> bool:
        if len(self.edges) != self.n_faces - 1:
            return False
        parent = list(range(self.n_faces))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a, b, _ in self.edges:
            ra, rb = find(a), find(b)
            if ra == rb:
                return False
            parent[ra] = rb
        return True


def dual_tree(G: PlanarGraph, T: ShortestPathTree) -> DualTree:
    """Dual edges of every primal edge not in ``T``."""
    face = G.face_of_dart()
    in_tree = T.edge_set
    edges = [(int(face[2 * e]), int(face[2 * e + 1]), e) for e in range(G.m) if e not in in_tree]
    return DualTree(len(G.faces()), edges)


def build_interdigitating_trees(G: PlanarGraph, root: int = 0) -> tuple[ShortestPathTree, DualTree]:
    if not G.is_triangulated():
        raise DomainError("interdigitating trees need a triangulated graph")
    T = shortest_path_tree(G, root)
    D = dual_tree(G, T)
    if not D.is_spanning_tree():
        raise DomainError("dual edges off the primal tree do not form a spanning tree")
    return T, D


@dataclass
class TreePartitionResult:
    parts: list[list[int]]
    boundary: list[list[int]]  # tree-edge indices leaving each part
    r_counts: list[int]

    def check(self, n_nodes: int, R) -> dict[str, bool]:
        flat = sorted(v for p in self.parts for v in p)
        Rs = set(int(r) for r in R)
        return {
            "disjoint_cover": flat == list(range(n_nodes)),
            "boundary_le_4": all(len(b) <= 4 for b in self.boundary),
            "r_nodes_le_3": all(sum(v in Rs for v in p) <= 3 for p in self.parts),
            "part_count_soft": len(self.parts) <= (len(Rs) + 2) ** 3,
        }


def tree_partition(n_nodes: int, edges, R) -> TreePartitionResult:
    """Split a max-degree-3 tree by edge removals.

    A piece with at least 4 nodes of ``R`` is cut: at an edge balancing its
    ``R`` nodes as evenly as possible when it has at most 3 boundary edges,
    or at an edge leaving each side with at most 3 boundary edges when it
    has exactly 4.  ``edges`` is a list of ``(a, b, ...)`` tuples.
    """
    edges = [(int(e[0]), int(e[1])) for e in edges]
    if n_nodes < 1:
        raise DomainError("empty tree")
    if len(edges) != n_nodes - 1:
        raise DomainError("edge count does not match a tree")
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n_nodes)]
    for i, (a, b) in enumerate(edges):
        adj[a].append((b, i))
        adj[b].append((a, i))
    if max(len(a) for a in adj) > 3:
        raise DomainError("tree has a node of degree greater than 3")
    seen, todo = {0}, [0]
    while todo:
        u = todo.pop()
        for v, _ in adj[u]:
            if v not in seen:
                seen.add(v)
                todo.append(v)
    if len(seen) != n_nodes:
        raise DomainError("input is not a tree")
    in_r = np.zeros(n_nodes, dtype=bool)
    for r in R:
        in_r[int(r)] = True

    removed = np.zeros(len(edges), dtype=bool)
    parts, bounds, counts = [], [], []
    stack = [(0, [])]  # (any node of the piece, its boundary edges)
    while stack:
        start, boundary = stack.pop()
        # root the piece at start, dfs order
        order, par, par_e = [start], {start: -1}, {start: -1}
        i = 0
        while i < len(order):
            u = order[i]
            i += 1
            for v, e in adj[u]:
                if removed[e] or v in par:
                    continue
                par[v], par_e[v] = u, e
                order.append(v)
        bset = set(boundary)
        stubs = {u: sum(1 for _, e in adj[u] if e in bset) for u in order}
        r_total = int(sum(in_r[u] for u in order))
        if r_total < 4:
            parts.append(sorted(order))
            bounds.append(sorted(boundary))
            counts.append(r_total)
            continue
        sub_r = {u: int(in_r[u]) for u in order}
        sub_b = dict(stubs)
        for u in reversed(order[1:]):
            sub_r[par[u]] += sub_r[u]
            sub_b[par[u]] += sub_b[u]
        nb = len(boundary)
        best, best_key = None, None
        for u in order[1:]:
            e = par_e[u]
            ra, rb = sub_r[u], r_total - sub_r[u]
            ba, bb = sub_b[u] + 1, nb - sub_b[u] + 1
            if nb <= 3:
                key = (max(ra, rb), e)
            else:
                if ba > 3 or bb > 3:
                    continue
                key = (0, e)
            if best_key is None or key < best_key:
                best, best_key = u, key
        if best is None:
            raise DomainError("no admissible cut edge; the piece has more than 4 boundary edges")
        e = par_e[best]
        removed[e] = True
        side = set()
        todo = [best]
        while todo:
            u = todo.pop()
            side.add(u)
            for v, f in adj[u]:
                if not removed[f] and v not in side and par.get(v) == u:
                    todo.append(v)
        in_side = [f for f in boundary if edges[f][0] in side or edges[f][1] in side]
        rest = [f for f in boundary if f not in in_side]
        stack.append((par[best], rest + [e]))
        stack.append((best, in_side + [e]))
    order_idx = sorted(range(len(parts)), key=lambda i: parts[i][0])
    return TreePartitionResult([parts[i] for i in order_idx], [bounds[i] for i in order_idx],
                               [counts[i] for i in order_idx])
