"""Vertex-dependent portals on a shortest path and the distance evaluators
built from them.

A separator path is treated as a segment of the real line: vertex ``i``
sits at ``positions[i]``, the length of the path prefix before it, so the
distance between two path vertices is the difference of their positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..metric import Metric
from .decompose import PlanarDecomposition


@dataclass
class SeparatorPath:
    vertices: np.ndarray
    positions: np.ndarray

    @classmethod
    def from_vertices(cls, vertices, metric: Metric | None = None, lengths=None):
        vertices = np.asarray(vertices, dtype=np.int64)
        if len(vertices) == 0:
            raise DomainError("empty path")
        if lengths is None:
            lengths = [metric.distance(int(a), int(b)) for a, b in zip(vertices, vertices[1:])]
        pos = np.concatenate([[0.0], np.cumsum(np.asarray(lengths, dtype=float))])
        return cls(vertices, pos)

    def __len__(self):
        return len(self.vertices)

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.vertices)


@dataclass
class PortalStructure:
    y: int
    epsilon: float
    path_key: tuple[int, ...]
    anchor: int          # index of h_y on the path
    radius: float        # d(y, h_y) = d(y, path)
    window: tuple[int, int]
    portals: list[int]   # indices q_1 = a, ..., q_m = b
    dist_to_path: np.ndarray  # d(y, v) for every path vertex
    l: np.ndarray        # l_y evaluated at every path vertex

    def portal_bound(self) -> float:
        return 2 * self.epsilon ** -2 + 3


OUTSIDE_RULES = ("shifted", "literal")


def build_portals(y: int, path: SeparatorPath, epsilon: float, metric: Metric | None = None,
                  dist_to_path=None, outside: str = "shifted") -> PortalStructure:
    """Anchor, window and greedy portal sequence of ``y`` on ``path``.

    ``h_y`` is the nearest path vertex (lowest position on ties).  The
    window ``[a, b]`` holds the path vertices within ``d(y, h_y) / eps`` of
    ``h_y``; portals start at ``a`` and step to the first vertex more than
    ``eps d(y, h_y)`` beyond the previous portal, ending at ``b``.

    Outside the window ``l_y(y')`` is ``d(h_y, y') - eps d(y, h_y)`` by
    default.  ``outside="literal"`` drops the shift; that value can reach
    ``d(y, y') / (1 - eps)``, beyond the ``(1 + eps)`` upper bound.
    """
    if outside not in OUTSIDE_RULES:
        raise DomainError(f"unknown outside-window rule {outside!r}")
    if not 0 < epsilon <= 0.5:
        raise DomainError("epsilon must lie in (0, 1/2]")
    dy = np.asarray(metric.pairwise([y], path.vertices)[0] if dist_to_path is None else dist_to_path, dtype=float)
    pos = path.positions
    L = len(pos)
    h = int(np.argmin(dy))
    r = float(dy[h])
    if r == 0:
        a = b = h
        Q = [h]
    else:
        reach = r / epsilon
        a = h
        while a > 0 and pos[h] - pos[a - 1] <= reach:
            a -= 1
        b = h
        while b < L - 1 and pos[b + 1] - pos[h] <= reach:
            b += 1
        Q = [a]
        step = epsilon * r
        while Q[-1] != b:
            q = Q[-1]
            nxt = q + 1 + int(np.searchsorted(pos[q + 1:b + 1] - pos[q], step, side="right"))
            Q.append(min(nxt, b))
    l = np.abs(pos - pos[h])
    if outside == "shifted":
        l = l - epsilon * r
    idx = np.arange(L)
    inside = (idx >= a) & (idx < b)
    # bracketing portal of each window vertex
    bracket = np.asarray(Q)[np.searchsorted(Q, idx[inside], side="right") - 1]
    l[inside] = dy[bracket]
    l[b] = dy[b]
    return PortalStructure(int(y), epsilon, path.key, h, r, (a, b), Q, dy, l)


def breakpoints(p: PortalStructure, L: int) -> set[int]:
    """Vertices where ``l_y`` can change slope or jump, plus both ends."""
    pts = {0, L - 1}
    for q in p.portals:
        pts.add(q)
        if q > 0:
            pts.add(q - 1)
    b = p.window[1]
    if b + 1 < L:
        pts.add(b + 1)
    return pts


def _check_pair(px: PortalStructure, pc: PortalStructure, path: SeparatorPath):
    if px.epsilon != pc.epsilon:
        raise DomainError("portal structures were built at different epsilon")
    if px.path_key != path.key or pc.path_key != path.key:
        raise DomainError("portal structures belong to a different path")


def approx_distance_through_path(px: PortalStructure, pc: PortalStructure, path: SeparatorPath) -> float:
    """``min l_c(c') + d(c', x') + l_x(x')`` over breakpoint pairs ``(c', x')``.

    Between breakpoints both ``l`` functions are constant or move at unit
    slope, so the minimum over breakpoints equals the minimum over the
    whole path.
    """
    _check_pair(px, pc, path)
    L = len(path)
    B = np.array(sorted(breakpoints(px, L) | breakpoints(pc, L)))
    pos = path.positions[B]
    table = pc.l[B][:, None] + np.abs(pos[:, None] - pos[None, :]) + px.l[B][None, :]
    return float(table.min())


def through_path_full(px: PortalStructure, pc: PortalStructure, path: SeparatorPath) -> float:
    """Same quantity minimised over every pair of path vertices."""
    _check_pair(px, pc, path)
    pos = path.positions
    table = pc.l[:, None] + np.abs(pos[:, None] - pos[None, :]) + px.l[None, :]
    return float(table.min())


def exact_through_path(x: int, c: int, path: SeparatorPath, metric: Metric) -> float:
    """``d_j(x, c) = min_u d(x, u) + d(u, c)`` over path vertices ``u``."""
    rows = metric.pairwise([x, c], path.vertices)
    return float((rows[0] + rows[1]).min())


def _spread(l: np.ndarray, pos: np.ndarray) -> np.ndarray:
    """``g[., i] = min_j l[., j] + |pos_i - pos_j|`` by two sweeps."""
    g = l.copy()
    gaps = np.diff(pos)
    for i in range(1, g.shape[1]):
        np.minimum(g[:, i], g[:, i - 1] + gaps[i - 1], out=g[:, i])
    for i in range(g.shape[1] - 2, -1, -1):
        np.minimum(g[:, i], g[:, i + 1] + gaps[i], out=g[:, i])
    return g


class SeparatorMetric(Metric):
    """One-sided evaluator ``f_x(c)`` for terminals ``x``.

    For a piece containing both ``x`` and ``c`` it is ``d(x, c)``; otherwise
    the best path-restricted approximation over the piece's separator paths,
    divided by ``1 - eps`` so it never undercuts ``d``.  A vertex in several
    pieces takes the minimum over them.  Rows exist only for terminals.
    """

    def __init__(self, table: np.ndarray, terminals, epsilon: float):
        self.terminals = np.asarray(terminals, dtype=np.int64)
        self._row = {int(t): i for i, t in enumerate(self.terminals)}
        self.table = table
        self.size = table.shape[1]
        self.epsilon = epsilon

    def _rows(self, xs, ys):
        try:
            r = [self._row[int(x)] for x in xs]
        except KeyError as exc:
            raise DomainError(f"point {exc.args[0]} is not a terminal of this evaluator") from None
        return self.table[np.ix_(r, ys)]

    def distances_to_set(self, sources):
        raise DomainError("the separator evaluator has rows for terminals only")


def separator_metric(dec: PlanarDecomposition, epsilon: float, terminals, metric: Metric,
                     with_portals: bool = False):
    terminals = np.array(sorted({int(t) for t in terminals}), dtype=np.int64)
    n = dec.graph.n
    exact = metric.pairwise(terminals)
    table = np.full((len(terminals), n), math.inf)
    structures = {}
    for verts, ps in zip(dec.parts, dec.paths):
        verts = np.asarray(verts, dtype=np.int64)
        vset = set(verts.tolist())
        inside = np.array([t in vset for t in terminals])
        best = np.full((len(terminals), len(verts)), math.inf)
        best[inside] = exact[np.ix_(inside, verts)]
        out_x = terminals[~inside]
        if len(out_x) and ps:
            approx = np.full((len(out_x), len(verts)), math.inf)
            for p in ps:
                sp = SeparatorPath.from_vertices(p, lengths=_tree_lengths(dec, p))
                px = [_portal(structures, sp, x, epsilon, metric) for x in out_x]
                pc = [_portal(structures, sp, c, epsilon, metric) for c in verts]
                g = _spread(np.stack([s.l for s in pc]), sp.positions)
                lx = np.stack([s.l for s in px])
                f = (lx[:, None, :] + g[None, :, :]).min(axis=2)
                np.minimum(approx, f, out=approx)
            best[~inside] = approx / (1 - epsilon)
        table[:, verts] = np.minimum(table[:, verts], best)
    if not np.all(np.isfinite(table)):
        raise DomainError("some terminal/vertex pair is not covered by any piece")
    sm = SeparatorMetric(table, terminals, epsilon)
    return (sm, structures) if with_portals else sm


def _tree_lengths(dec: PlanarDecomposition, p):
    return [dec.triangulated.edges[int(dec.tree.parent_edge[v])][2] for v in p[1:]]


def _portal(cache, sp: SeparatorPath, y, epsilon, metric):
    k = (sp.key, int(y))
    if k not in cache:
        cache[k] = build_portals(int(y), sp, epsilon, metric)
    return cache[k]


@dataclass
class PathSweep:
    pairs: int
    l_violations: int
    f_violations: int
    portal_violations: int
    restricted_mismatches: int
    max_l_ratio: float
    min_l_ratio: float
    max_f_ratio: float
    min_f_ratio: float
    max_portals: int


def sweep_path(sp: SeparatorPath, metric: Metric, epsilon: float, outside: str = "shifted",
               check_restricted: bool = True, tol: float = 1e-12) -> PathSweep:
    """Exhaustive distortion checks for one path over every vertex pair.

    ``l_y`` is compared with ``d(y, .)`` on the path, and the path-restricted
    evaluator with ``d_j(x, c) = min_u d(x, u) + d(u, c)``.
    """
    n = metric.size
    D = metric.pairwise(np.arange(n), sp.vertices)
    st = [build_portals(y, sp, epsilon, dist_to_path=D[y], outside=outside) for y in range(n)]
    Lm = np.stack([s.l for s in st])
    pos = sp.positions
    L = len(pos)

    lo, hi = (1 - epsilon) * D, (1 + epsilon) * D
    l_bad = int(np.count_nonzero((Lm < lo - tol * D) | (Lm > hi + tol * D)))
    mask = D > 0
    lr = Lm[mask] / D[mask] if mask.any() else np.ones(1)

    G = _spread(Lm, pos)
    f = (Lm[:, None, :] + G[None, :, :]).min(axis=2)      # f[x, c]
    dj = (D[:, None, :] + D[None, :, :]).min(axis=2)
    f_bad = int(np.count_nonzero((f < (1 - epsilon) * dj * (1 - tol)) | (f > (1 + epsilon) * dj * (1 + tol))))
    fm = dj > 0
    fr = f[fm] / dj[fm] if fm.any() else np.ones(1)

    mism = 0
    if check_restricted:
        bmask = np.zeros((n, L), dtype=bool)
        for y, s in enumerate(st):
            bmask[y, list(breakpoints(s, L))] = True
        gap = np.abs(pos[:, None] - pos[None, :])
        A = Lm[:, :, None] + gap[None, :, :]              # A[c, c', x']
        for x in range(n):
            B = bmask[x][None, :] | bmask                   # per c
            val = A + Lm[x][None, None, :]
            val = np.where(B[:, :, None] & B[:, None, :], val, np.inf).min(axis=(1, 2))
            mism += int(np.count_nonzero(np.abs(val - f[x]) > 1e-9 * np.maximum(f[x], 1.0)))
    counts = [len(s.portals) for s in st]
    bound = 2 * epsilon ** -2 + 3
    return PathSweep(n * n, l_bad, f_bad, sum(c > bound for c in counts), mism,
                     float(lr.max()), float(lr.min()), float(fr.max()), float(fr.min()), max(counts))


def decomposition_paths(dec: PlanarDecomposition) -> list[SeparatorPath]:
    seen, out = set(), []
    for ps in dec.paths:
        for p in ps:
            sp = SeparatorPath.from_vertices(p, lengths=_tree_lengths(dec, p))
            if sp.key not in seen:
                seen.add(sp.key)
                out.append(sp)
    return out
