"""Weighted point sets, distance oracles and the clustering cost.

Point identifiers are integer indices into the ambient space ``V`` of a
metric.  Three backends are provided: Euclidean coordinates, the shortest
path metric of a connected weighted graph, and an explicit distance table.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

# rows are computed in blocks so that X x V tables never blow up memory
_BLOCK = 2048


class WeightedPointSet:
    """A finite set ``X`` of ambient point ids with positive weights."""

    def __init__(self, points, weights=None):
        points = np.asarray(points, dtype=np.int64).reshape(-1)
        if weights is None:
            weights = np.ones(len(points))
        weights = np.asarray(weights, dtype=float).reshape(-1)
        if len(points) == 0:
            raise DomainError("a weighted point set needs at least one point")
        if len(weights) != len(points):
            raise DomainError("points and weights differ in length")
        if len(np.unique(points)) != len(points):
            raise DomainError("point identifiers must be distinct")
        if np.any(points < 0):
            raise DomainError("point identifiers must be nonnegative")
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            raise DomainError("weights must be finite and strictly positive")
        self.points = points
        self.weights = weights

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, float]]) -> "WeightedPointSet":
        """Build from ``(id, weight)`` pairs, adding weights of repeated ids."""
        acc: dict[int, float] = {}
        for pid, w in pairs:
            acc[int(pid)] = acc.get(int(pid), 0.0) + float(w)
        ids = sorted(acc)
        return cls(ids, [acc[i] for i in ids])

    def __len__(self):
        return len(self.points)

    @property
    def size(self) -> int:
        """``||X||_0``, the number of distinct points."""
        return len(self.points)

    @property
    def total_weight(self) -> float:
        """``||X||_1``."""
        return float(self.weights.sum())

    def scaled(self, factor: float) -> "WeightedPointSet":
        return WeightedPointSet(self.points.copy(), self.weights * factor)

    def weight_map(self) -> dict[int, float]:
        return {int(p): float(w) for p, w in zip(self.points, self.weights)}

    def __repr__(self):
        return f"WeightedPointSet(n={self.size}, total={self.total_weight:.6g})"


@dataclass(frozen=True)
class ClusteringParams:
    k: int
    z: float = 1.0
    epsilon: float = 0.2
    delta: float = 0.1

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise DomainError(f"k must be a positive integer, got {self.k}")
        if not self.z >= 1:
            raise DomainError(f"z must be >= 1, got {self.z}")
        if not 0 < self.epsilon < 0.5:
            raise DomainError(f"epsilon must lie in (0, 1/2), got {self.epsilon}")
        if not 0 < self.delta < 0.5:
            raise DomainError(f"delta must lie in (0, 1/2), got {self.delta}")


def center_set(centers: Iterable[int], k_bound: int | None = None) -> tuple[int, ...]:
    """Normalise a center collection to a sorted tuple of distinct ids."""
    cs = tuple(sorted({int(c) for c in centers}))
    if not cs:
        raise DomainError("center set is empty")
    if k_bound is not None and len(cs) > k_bound:
        raise DomainError(f"{len(cs)} centers exceed the bound {k_bound}")
    return cs


class Metric:
    """Distance oracle over the ambient space ``{0, ..., size-1}``.

    Subclasses implement ``_rows``; everything else is derived from it.
    """

    size: int

    def check_ids(self, ids) -> np.ndarray:
        ids = np.asarray(ids, dtype=np.int64).reshape(-1)
        if ids.size and (ids.min() < 0 or ids.max() >= self.size):
            bad = ids[(ids < 0) | (ids >= self.size)][0]
            raise DomainError(f"point id {bad} not in ambient space of size {self.size}")
        return ids

    def _rows(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def pairwise(self, xs, ys=None) -> np.ndarray:
        """Table of ``d(x, y)`` for ``x`` in ``xs`` and ``y`` in ``ys`` (default: all of V)."""
        xs = self.check_ids(xs)
        ys = np.arange(self.size) if ys is None else self.check_ids(ys)
        return self._rows(xs, ys)

    def distance(self, x: int, y: int) -> float:
        return float(self.pairwise([x], [y])[0, 0])

    def distances_to_set(self, sources) -> tuple[np.ndarray, np.ndarray]:
        """Distance from every ambient point to ``sources`` with its nearest source.

        Ties go to the lowest source id.
        """
        src = np.array(sorted({int(s) for s in np.asarray(sources).reshape(-1)}), dtype=np.int64)
        if src.size == 0:
            raise DomainError("source set is empty")
        self.check_ids(src)
        best = np.full(self.size, np.inf)
        nearest = np.full(self.size, -1, dtype=np.int64)
        for start in range(0, self.size, _BLOCK):
            ys = np.arange(start, min(start + _BLOCK, self.size))
            block = self._rows(src, ys)  # |src| x block
            # argmin returns the first minimum, and src is sorted ascending
            idx = np.argmin(block, axis=0)
            best[ys] = block[idx, np.arange(len(ys))]
            nearest[ys] = src[idx]
        return best, nearest

    def nearest_in(self, xs, sources) -> tuple[np.ndarray, np.ndarray]:
        """``d(x, sources)`` and nearest source for each ``x`` in ``xs`` only."""
        src = np.array(sorted({int(s) for s in np.asarray(sources).reshape(-1)}), dtype=np.int64)
        if src.size == 0:
            raise DomainError("source set is empty")
        block = self.pairwise(xs, src)
        idx = np.argmin(block, axis=1)
        return block[np.arange(block.shape[0]), idx], src[idx]


class EuclideanMetric(Metric):
    """Points of ``R^m`` given by a coordinate table (one row per ambient id)."""

    def __init__(self, coords):
        coords = np.asarray(coords, dtype=float)
        if coords.ndim == 1:
            coords = coords[:, None]
        if coords.ndim != 2 or coords.shape[0] == 0:
            raise DomainError("coordinate table must be a nonempty 2-d array")
        if not np.all(np.isfinite(coords)):
            raise DomainError("coordinates must be finite")
        self.coords = coords
        self.size = coords.shape[0]
        self.dimension = coords.shape[1]

    def _rows(self, xs, ys):
        a = self.coords[xs]
        b = self.coords[ys]
        out = np.empty((len(xs), len(ys)))
        step = max(1, _BLOCK * 64 // max(1, len(ys) * self.dimension))
        for i in range(0, len(xs), step):
            diff = a[i:i + step, None, :] - b[None, :, :]
            out[i:i + step] = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        return out


class MatrixMetric(Metric):
    """An explicit symmetric table with zero diagonal.

    The triangle inequality is not enforced at load time; call
    :meth:`check_triangle` where it matters.
    """

    def __init__(self, table):
        table = np.asarray(table, dtype=float)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise DomainError("distance table must be square and nonempty")
        if np.any(table < 0) or not np.all(np.isfinite(table)):
            raise DomainError("distances must be finite and nonnegative")
        if not np.array_equal(table, table.T):
            raise DomainError("distance table is not symmetric")
        if np.any(np.diag(table) != 0):
            raise DomainError("distance table has a nonzero diagonal")
        self.table = table
        self.size = table.shape[0]

    def _rows(self, xs, ys):
        return self.table[np.ix_(xs, ys)]

    def check_triangle(self, rel_tol: float = 1e-12) -> bool:
        t = self.table
        for v in range(self.size):
            via = t[:, v][:, None] + t[v, :][None, :]
            if np.any(t > via * (1 + rel_tol) + 1e-300):
                return False
        return True


class GraphMetric(Metric):
    """Shortest-path metric of a connected undirected graph.

    ``edges`` is a sequence of ``(u, v, w)`` with ``w >= 0``.  Parallel edges
    keep the lightest weight.  Single-source rows are cached.
    """

    def __init__(self, n: int, edges: Sequence[tuple[int, int, float]]):
        if n < 1:
            raise DomainError("graph needs at least one vertex")
        adj: list[dict[int, float]] = [dict() for _ in range(n)]
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if not math.isfinite(w) or w < 0:
                raise DomainError(f"edge ({u}, {v}) has invalid weight {w}")
            if u == v:
                continue
            if w < adj[u].get(v, math.inf):
                adj[u][v] = w
                adj[v][u] = w
        self.size = n
        self.adj = [sorted(a.items()) for a in adj]
        self._cache: dict[int, np.ndarray] = {}
        if not np.all(np.isfinite(self._sweep([0])[0])):
            raise DomainError("graph is disconnected; distances would be infinite")

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [(u, v, w) for u in range(self.size) for v, w in self.adj[u] if u < v]

    def _sweep(self, sources) -> tuple[np.ndarray, np.ndarray]:
        # Dijkstra from a virtual root joined to every source by a 0-weight
        # edge; labels compare as (distance, source id) so ties pick the
        # lowest source.
        n = self.size
        dist = [math.inf] * n
        origin = [-1] * n
        heap = []
        for s in sorted(set(int(s) for s in sources)):
            dist[s] = 0.0
            origin[s] = s
            heap.append((0.0, s, s))
        heapq.heapify(heap)
        done = [False] * n
        while heap:
            d, o, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for v, w in self.adj[u]:
                nd = d + w
                if nd < dist[v] or (nd == dist[v] and o < origin[v]):
                    dist[v] = nd
                    origin[v] = o
                    heapq.heappush(heap, (nd, o, v))
        return np.array(dist), np.array(origin, dtype=np.int64)

    def row(self, x: int) -> np.ndarray:
        r = self._cache.get(x)
        if r is None:
            r = self._sweep([x])[0]
            r.setflags(write=False)
            self._cache[x] = r
        return r

    def _rows(self, xs, ys):
        return np.stack([self.row(int(x))[ys] for x in xs]) if len(xs) else np.empty((0, len(ys)))

    def distances_to_set(self, sources):
        src = [int(s) for s in np.asarray(sources).reshape(-1)]
        if not src:
            raise DomainError("source set is empty")
        self.check_ids(src)
        return self._sweep(src)

    def nearest_in(self, xs, sources):
        xs = self.check_ids(xs)
        dist, origin = self.distances_to_set(sources)
        return dist[xs], origin[xs]


def distance(metric: Metric, x: int, y: int) -> float:
    return metric.distance(x, y)


def distances_to_set(metric: Metric, sources) -> tuple[np.ndarray, np.ndarray]:
    return metric.distances_to_set(sources)


def point_costs(X: WeightedPointSet, centers, metric: Metric, z: float = 1.0) -> np.ndarray:
    """Per-point ``w(x) * d(x, C)^z``."""
    cs = metric.check_ids(list(center_set(centers)))
    d = metric.pairwise(X.points, cs).min(axis=1)
    return X.weights * d ** z


def cost(X: WeightedPointSet, centers, metric: Metric, z: float = 1.0) -> float:
    """``cost_z(X, C) = sum_x w(x) * d(x, C)^z``."""
    return float(point_costs(X, centers, metric, z).sum())


def power_triangle_check(metric: Metric, z: float, triples, rel_tol: float = 1e-12) -> bool:
    """Check ``d^z(x,y) <= 2^(z-1) [d^z(x,x') + d^z(x',y)]`` on each triple."""
    if z < 1:
        raise DomainError("z must be >= 1")
    tr = np.asarray(triples, dtype=np.int64).reshape(-1, 3)
    return bool(power_triangle_violations(metric, z, tr, rel_tol) == 0)


def power_triangle_violations(metric: Metric, z: float, triples, rel_tol: float = 1e-12) -> int:
    tr = np.asarray(triples, dtype=np.int64).reshape(-1, 3)
    ids = np.unique(tr)
    table = metric.pairwise(ids, ids)
    pos = {int(v): i for i, v in enumerate(ids)}
    a = np.array([pos[int(v)] for v in tr[:, 0]], dtype=np.int64)
    m = np.array([pos[int(v)] for v in tr[:, 1]], dtype=np.int64)
    b = np.array([pos[int(v)] for v in tr[:, 2]], dtype=np.int64)
    lhs = table[a, b] ** z
    rhs = 2.0 ** (z - 1) * (table[a, m] ** z + table[m, b] ** z)
    return int(np.count_nonzero(lhs > rhs * (1 + rel_tol)))
