"""Readers and writers for point tables, edge lists and JSON artifacts.

Point tables are CSV with header ``id,weight,c1,...,cm`` (Euclidean) or
``id,weight,vertex`` (attached to graph vertices).  Graphs are whitespace
separated edge lists whose first line is ``p <n> <m>``, followed by ``m``
lines ``u v w`` and optional rotation lines ``r <v> <e1> <e2> ...`` listing
the edge indices around ``v`` in cyclic order.  Vertices and edge indices
are 0-based.  All numbers are parsed with ``float``/``int`` so parsing does
not depend on the locale.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, ParseError
from .metric import EuclideanMetric, GraphMetric, WeightedPointSet


def _num(path, line, text, kind=float):
    try:
        return kind(text)
    except ValueError:
        raise ParseError(path, line, f"cannot parse {text!r} as {kind.__name__}") from None


@dataclass
class PointTable:
    ids: list[int]
    weights: list[float]
    coords: np.ndarray | None = None
    vertices: list[int] | None = None

    @property
    def euclidean(self) -> bool:
        return self.coords is not None


def read_points(path) -> PointTable:
    path = str(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError(path, 1, "empty file")
    header = [h.strip() for h in rows[0]]
    if len(header) < 3 or header[0] != "id" or header[1] != "weight":
        raise ParseError(path, 1, "header must start with id,weight")
    graph = header[2:] == ["vertex"]
    if not graph and header[2:] != [f"c{i}" for i in range(1, len(header) - 1)]:
        raise ParseError(path, 1, "expected coordinate columns c1..cm or a vertex column")
    ids, weights, coords, verts = [], [], [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise ParseError(path, lineno, f"expected {len(header)} fields, got {len(row)}")
        ids.append(_num(path, lineno, row[0].strip(), int))
        w = _num(path, lineno, row[1].strip())
        if not w > 0:
            raise ParseError(path, lineno, f"weight must be positive, got {w}")
        weights.append(w)
        if graph:
            verts.append(_num(path, lineno, row[2].strip(), int))
        else:
            coords.append([_num(path, lineno, c.strip()) for c in row[2:]])
    if not ids:
        raise ParseError(path, len(rows), "no data rows")
    if len(set(ids)) != len(ids):
        raise ParseError(path, 1, "duplicate point ids")
    if graph:
        return PointTable(ids, weights, vertices=verts)
    return PointTable(ids, weights, coords=np.array(coords, dtype=float))


def euclidean_instance(points: PointTable, ambient: PointTable | None = None):
    """Ambient metric and data set from point tables.

    Ids index the ambient space: the union of ids over ``points`` and the
    optional extra candidate centers in ``ambient`` must be ``0..|V|-1``.
    """
    tables = [points] + ([ambient] if ambient is not None else [])
    if any(not t.euclidean for t in tables):
        raise DomainError("euclidean instance needs coordinate columns")
    dims = {t.coords.shape[1] for t in tables}
    if len(dims) != 1:
        raise DomainError("point tables disagree on dimension")
    all_ids = [i for t in tables for i in t.ids]
    n = len(all_ids)
    if sorted(all_ids) != list(range(n)):
        raise DomainError("ids across point tables must be exactly 0..|V|-1")
    coords = np.empty((n, dims.pop()))
    for t in tables:
        coords[t.ids] = t.coords
    X = WeightedPointSet(points.ids, points.weights)
    return EuclideanMetric(coords), X


def graph_points(points: PointTable, n: int) -> WeightedPointSet:
    if points.vertices is None:
        raise DomainError("graph instance needs a vertex column")
    if any(not 0 <= v < n for v in points.vertices):
        raise DomainError("point attached to a vertex outside the graph")
    return WeightedPointSet.from_pairs(zip(points.vertices, points.weights))


@dataclass
class GraphFile:
    n: int
    edges: list[tuple[int, int, float]]
    rotation: dict[int, list[int]] | None = None

    def metric(self) -> GraphMetric:
        return GraphMetric(self.n, self.edges)


def read_graph(path) -> GraphFile:
    path = str(path)
    n = m = None
    edges: list[tuple[int, int, float]] = []
    rotation: dict[int, list[int]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            parts = raw.split()
            if not parts or parts[0].startswith("#") or parts[0] == "c":
                continue
            if n is None:
                if parts[0] != "p" or len(parts) != 3:
                    raise ParseError(path, lineno, "first line must be 'p <n> <m>'")
                n = _num(path, lineno, parts[1], int)
                m = _num(path, lineno, parts[2], int)
                if n < 1 or m < 0:
                    raise ParseError(path, lineno, "vertex count must be >= 1 and edge count >= 0")
                continue
            if parts[0] == "r":
                if len(parts) < 2:
                    raise ParseError(path, lineno, "rotation line needs a vertex")
                v = _num(path, lineno, parts[1], int)
                if not 0 <= v < n or v in rotation:
                    raise ParseError(path, lineno, f"bad or repeated rotation vertex {v}")
                es = [_num(path, lineno, e, int) for e in parts[2:]]
                if any(not 0 <= e < m for e in es):
                    raise ParseError(path, lineno, "rotation refers to an unknown edge index")
                rotation[v] = es
                continue
            if len(parts) != 3:
                raise ParseError(path, lineno, "edge line must be 'u v w'")
            if len(edges) >= m:
                raise ParseError(path, lineno, f"more than the declared {m} edges")
            u = _num(path, lineno, parts[0], int)
            v = _num(path, lineno, parts[1], int)
            w = _num(path, lineno, parts[2])
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(path, lineno, f"edge endpoint outside 0..{n - 1}")
            if not w >= 0:
                raise ParseError(path, lineno, f"edge weight must be nonnegative, got {w}")
            edges.append((u, v, w))
    if n is None:
        raise ParseError(path, 1, "missing 'p <n> <m>' line")
    if len(edges) != m:
        raise ParseError(path, lineno, f"declared {m} edges, found {len(edges)}")
    return GraphFile(n, edges, rotation or None)


def write_graph(path, n, edges, rotation=None):
    lines = [f"p {n} {len(edges)}"]
    lines += [f"{u} {v} {repr(float(w))}" for u, v, w in edges]
    if rotation:
        for v in sorted(rotation):
            lines.append("r " + " ".join(str(x) for x in [v, *rotation[v]]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_points(path, ids, weights, coords=None, vertices=None):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        if vertices is not None:
            wr.writerow(["id", "weight", "vertex"])
            for i, w, v in zip(ids, weights, vertices):
                wr.writerow([i, repr(float(w)), v])
        else:
            coords = np.asarray(coords, dtype=float)
            wr.writerow(["id", "weight"] + [f"c{j + 1}" for j in range(coords.shape[1])])
            for i, w, row in zip(ids, weights, coords):
                wr.writerow([i, repr(float(w))] + [repr(float(c)) for c in row])


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, allow_nan=False) + "\n"
