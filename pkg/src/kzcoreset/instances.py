"""Seeded instance generators for tests, calibration and acceptance runs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import Delaunay

from .metric import EuclideanMetric, GraphMetric, Metric, WeightedPointSet
from .planar.graph import PlanarGraph
from .rng import stream


@dataclass
class Instance:
    name: str
    metric: Metric
    X: WeightedPointSet
    k: int
    z: float
    backend: str


def random_weights(rng, n, low=1.0, high=3.0):
    return rng.uniform(low, high, size=n)


def clustered_coords(rng, n, dim, clusters, spread=0.15):
    centers = rng.uniform(0, 1, size=(clusters, dim))
    lab = rng.integers(0, clusters, size=n)
    return centers[lab] + spread * rng.standard_normal((n, dim))


def random_euclidean(n_ambient: int, dim: int, n_points: int, seed: int, clusters: int = 3,
                     weighted: bool = True) -> tuple[EuclideanMetric, WeightedPointSet]:
    rng = stream(seed, 0)
    coords = clustered_coords(rng, n_ambient, dim, clusters)
    pts = np.sort(rng.choice(n_ambient, size=n_points, replace=False))
    w = random_weights(rng, n_points) if weighted else np.ones(n_points)
    return EuclideanMetric(coords), WeightedPointSet(pts, w)


def random_tree_edges(rng, n):
    """Uniform random recursive tree on ``range(n)`` as vertex pairs."""
    perm = rng.permutation(n)
    return [(int(perm[i]), int(perm[rng.integers(0, i)])) for i in range(1, n)]


def random_graph(n: int, seed: int, extra: float = 0.3, wmax: float = 10.0) -> GraphMetric:
    """Connected graph: random tree plus each other pair with probability ``extra``."""
    rng = stream(seed, 0)
    pairs = {tuple(sorted(e)) for e in random_tree_edges(rng, n)}
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in pairs and rng.random() < extra:
                pairs.add((u, v))
    edges = [(u, v, float(rng.uniform(1, wmax))) for u, v in sorted(pairs)]
    return GraphMetric(n, edges)


def random_graph_instance(n: int, n_points: int, seed: int, extra: float = 0.3) -> tuple[GraphMetric, WeightedPointSet]:
    G = random_graph(n, seed, extra)
    rng = stream(seed, 1)
    pts = np.sort(rng.choice(n, size=n_points, replace=False))
    return G, WeightedPointSet(pts, random_weights(rng, n_points))


def delaunay_planar(n: int, seed: int, keep: float = 0.5) -> tuple[PlanarGraph, np.ndarray]:
    """Random connected straight-line planar graph.

    A random spanning tree of the Delaunay triangulation is kept, every other
    Delaunay edge survives with probability ``keep``; weights are Euclidean
    lengths times a ``U(1, 2)`` factor.
    """
    rng = stream(seed, 0)
    coords = rng.uniform(0, 1, size=(n, 2))
    if n < 3:
        edges = [(i, i + 1) for i in range(n - 1)]
    else:
        tri = Delaunay(coords)
        es = set()
        for s in tri.simplices:
            for i in range(3):
                a, b = int(s[i]), int(s[(i + 1) % 3])
                es.add((min(a, b), max(a, b)))
        es = sorted(es)
        # random spanning tree: Kruskal on random keys
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        keys = rng.random(len(es))
        tree, rest = [], []
        for i in np.argsort(keys):
            a, b = es[i]
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                tree.append(es[i])
            else:
                rest.append(es[i])
        kept = [e for e in rest if rng.random() < keep]
        edges = sorted(tree + kept)
    wts = [float(np.linalg.norm(coords[a] - coords[b]) * rng.uniform(1, 2)) for a, b in edges]
    G = PlanarGraph.from_coordinates(coords, [(a, b, w) for (a, b), w in zip(edges, wts)])
    return G, coords


def grid_planar(rows: int, cols: int, seed: int | None = None) -> tuple[PlanarGraph, np.ndarray]:
    """``rows x cols`` grid; unit weights, or ``U(1, 2)`` when seeded."""
    coords = np.array([(c, r) for r in range(rows) for c in range(cols)], dtype=float)
    rng = None if seed is None else stream(seed, 0)
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            for u in ((v + 1) if c + 1 < cols else None, (v + cols) if r + 1 < rows else None):
                if u is not None:
                    edges.append((v, u, 1.0 if rng is None else float(rng.uniform(1, 2))))
    return PlanarGraph.from_coordinates(coords, edges), coords


def acceptance_family(seed: int = 2024) -> list[Instance]:
    """The fixed 20-instance family: |V| <= 14, k in {1,2,3}, z in {1,2}.

    Even indices are Euclidean, odd ones are graph metrics; every (k, z)
    pair appears on both backends.
    """
    out = []
    combos = [(k, z) for k in (1, 2, 3) for z in (1, 2)]
    for i in range(20):
        k, z = combos[(i // 2) % 6]
        n = 10 + i % 5
        npts = n - (i // 5) % 3
        s = seed * 1000 + i
        if i % 2 == 0:
            metric, X = random_euclidean(n, 2, npts, s, clusters=k + 1)
            backend = "euclidean"
        else:
            metric, X = random_graph_instance(n, npts, s)
            backend = "graph"
        out.append(Instance(f"fam{i:02d}-{backend}-k{k}-z{z}", metric, X, k, float(z), backend))
    return out
