"""Embedded planar graphs as rotation systems on darts.

Edge ``e = (u, v)`` owns dart ``2e`` (u to v) and dart ``2e + 1`` (v to u).
``rotation[v]`` lists the darts leaving ``v`` in cyclic order and
``sigma(d)`` is the dart after ``d`` around its tail.  Faces are the
orbits of ``phi(d) = sigma(rev(d))``.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..metric import GraphMetric


def rev(d: int) -> int:
    return d ^ 1


class PlanarGraph:
    def __init__(self, n: int, edges, rotation, original_edges: int | None = None):
        self.n = int(n)
        self.edges = [(int(u), int(v), float(w)) for u, v, w in edges]
        for u, v, w in self.edges:
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise DomainError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
            if w < 0 or not math.isfinite(w):
                raise DomainError(f"edge ({u}, {v}) has invalid weight {w}")
        self.m_original = len(self.edges) if original_edges is None else original_edges
        self.rotation = [list(map(int, r)) for r in rotation]
        if len(self.rotation) != self.n:
            raise DomainError("rotation system must list every vertex")
        self._check_rotation()
        self._faces = None

    # --- construction ---------------------------------------------------

    @classmethod
    def from_edge_rotation(cls, n, edges, edge_rotation):
        """Rotation given as edge indices around each vertex (file format)."""
        rot = []
        for v in range(n):
            darts = []
            for e in edge_rotation[v]:
                u, w_, _ = edges[e]
                if u == v:
                    darts.append(2 * e)
                elif w_ == v:
                    darts.append(2 * e + 1)
                else:
                    raise DomainError(f"edge {e} is not incident to vertex {v}")
            rot.append(darts)
        return cls(n, edges, rot)

    @classmethod
    def from_coordinates(cls, coords, edges):
        """Straight-line embedding: darts around each vertex sorted by angle."""
        coords = np.asarray(coords, dtype=float)
        n = len(coords)
        out: list[list[tuple[float, int]]] = [[] for _ in range(n)]
        for e, (u, v, _) in enumerate(edges):
            du = coords[v] - coords[u]
            out[u].append((math.atan2(du[1], du[0]), 2 * e))
            out[v].append((math.atan2(-du[1], -du[0]), 2 * e + 1))
        rot = [[d for _, d in sorted(lst)] for lst in out]
        return cls(n, edges, rot)

    def edge_rotation(self) -> dict[int, list[int]]:
        """Rotation as edge indices per vertex, the graph-file form."""
        return {v: [d >> 1 for d in darts] for v, darts in enumerate(self.rotation) if darts}

    def _check_rotation(self):
        seen = np.zeros(2 * len(self.edges), dtype=bool)
        for v, darts in enumerate(self.rotation):
            for d in darts:
                if not 0 <= d < 2 * len(self.edges) or self.tail(d) != v:
                    raise DomainError(f"dart {d} does not leave vertex {v}")
                if seen[d]:
                    raise DomainError(f"dart {d} listed twice")
                seen[d] = True
        if not seen.all():
            raise DomainError("rotation system misses some edges")
        self._pos = {}
        for darts in self.rotation:
            for i, d in enumerate(darts):
                self._pos[d] = i

    # --- basic queries -----------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def tail(self, d: int) -> int:
        u, v, _ = self.edges[d >> 1]
        return u if d % 2 == 0 else v

    def head(self, d: int) -> int:
        return self.tail(rev(d))

    def weight(self, d: int) -> float:
        return self.edges[d >> 1][2]

    def sigma(self, d: int) -> int:
        r = self.rotation[self.tail(d)]
        return r[(self._pos[d] + 1) % len(r)]

    def phi(self, d: int) -> int:
        return self.sigma(rev(d))

    def faces(self) -> list[list[int]]:
        """Face boundary walks as dart lists, in order of their smallest dart."""
        if self._faces is None:
            done = np.zeros(2 * self.m, dtype=bool)
            faces = []
            for d0 in range(2 * self.m):
                if done[d0]:
                    continue
                walk, d = [], d0
                while not done[d]:
                    done[d] = True
                    walk.append(d)
                    d = self.phi(d)
                faces.append(walk)
            if self.m == 0:
                faces = [[]]
            self._faces = faces
        return self._faces

    def face_of_dart(self) -> np.ndarray:
        out = np.empty(2 * self.m, dtype=np.int64)
        for f, walk in enumerate(self.faces()):
            for d in walk:
                out[d] = f
        return out

    def face_vertices(self, f: int) -> list[int]:
        walk = self.faces()[f]
        if not walk:
            return list(range(self.n))
        return [self.tail(d) for d in walk]

    def euler_ok(self) -> bool:
        return self.n - self.m + len(self.faces()) == 2

    def is_triangulated(self) -> bool:
        return all(len(w) == 3 for w in self.faces())

    def metric(self) -> GraphMetric:
        return GraphMetric(self.n, self.edges)

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """``adj[u]`` = list of ``(v, edge)``."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for e, (u, v, _) in enumerate(self.edges):
            adj[u].append((v, e))
            adj[v].append((u, e))
        return adj

    def validate(self):
        if not self.euler_ok():
            raise DomainError(
                f"rotation system fails the Euler check: V - E + F = "
                f"{self.n} - {self.m} + {len(self.faces())} != 2")

    # --- triangulation ---------------------------------------------------

    def sentinel_weight(self) -> float:
        wmax = max((w for _, _, w in self.edges[:self.m_original]), default=0.0)
        return (self.n + 1) * wmax if wmax > 0 else 1.0

    def triangulate(self) -> "PlanarGraph":
        """Add chords until every face is a triangle.

        Chords get :meth:`sentinel_weight`, which exceeds every simple-path
        length, so shortest paths between original vertices never use them.
        """
        self.validate()
        if self.is_triangulated() or self.n <= 2:
            return self
        W = self.sentinel_weight()
        edges = list(self.edges)
        # cyclic doubly linked rotation lists
        nxt, prv = {}, {}
        for darts in self.rotation:
            L = len(darts)
            for i, d in enumerate(darts):
                nxt[d] = darts[(i + 1) % L]
                prv[d] = darts[(i - 1) % L]
        pairs = {(min(u, v), max(u, v)) for u, v, _ in edges}

        def tail(d):
            u, v, _ = edges[d >> 1]
            return u if d % 2 == 0 else v

        def insert_after(x, d):
            y = nxt[x]
            nxt[x], prv[d], nxt[d], prv[y] = d, x, y, d

        for walk in self.faces():
            walk = list(walk)
            while len(walk) > 3:
                L = len(walk)
                ws = [tail(d) for d in walk]
                pick = None
                for i in range(L):
                    a, b = ws[i], ws[(i + 2) % L]
                    if a == b:
                        continue
                    if (min(a, b), max(a, b)) not in pairs:
                        pick = i
                        break
                    if pick is None:
                        pick = i
                if pick is None:
                    raise DomainError("face cannot be triangulated without a self-loop")
                i = pick
                di, dj = walk[i], walk[(i + 1) % L]
                a, b = ws[i], ws[(i + 2) % L]
                e = len(edges)
                edges.append((a, b, W))
                pairs.add((min(a, b), max(a, b)))
                out_a, out_b = 2 * e, 2 * e + 1  # a -> b and b -> a
                insert_after(prv[di], out_a)
                insert_after(rev(dj), out_b)
                # the triangle (di, dj, out_b) closes; the rest keeps out_a
                if i + 1 < L:
                    walk = walk[:i] + [out_a] + walk[i + 2:]
                else:
                    walk = [out_a] + walk[1:i]
        rot = []
        for v, darts in enumerate(self.rotation):
            if not darts:
                rot.append([])
                continue
            start = darts[0]
            cyc, d = [start], nxt[start]
            while d != start:
                cyc.append(d)
                d = nxt[d]
            rot.append(cyc)
        out = PlanarGraph(self.n, edges, rot, original_edges=self.m_original)
        out.validate()
        if not out.is_triangulated():
            raise DomainError("triangulation left a non-triangular face")
        return out
