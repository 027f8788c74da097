import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import floyd_warshall

from kzcoreset.errors import DomainError
from kzcoreset.instances import delaunay_planar, grid_planar
from kzcoreset.planar import PlanarGraph, triangulation_preserves_distances


def fw(n, edges):
    """Independent all-pairs oracle (scipy Floyd-Warshall)."""
    A = np.zeros((n, n))
    for u, v, w in edges:
        if A[u, v] == 0 or w < A[u, v]:
            A[u, v] = A[v, u] = max(w, 1e-300)
    return floyd_warshall(csr_matrix(A), directed=False)


def square():
    coords = [(0, 0), (1, 0), (1, 1), (0, 1)]
    return PlanarGraph.from_coordinates(coords, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (3, 0, 3.0)])


def test_faces_and_euler():
    G = square()
    assert len(G.faces()) == 2 and G.euler_ok()
    assert sorted(len(f) for f in G.faces()) == [4, 4]
    for d in range(2 * G.m):
        assert G.head(d) == G.tail(d ^ 1)
        assert G.tail(G.phi(d)) == G.head(d)


def test_triangulated_input_unchanged():
    G = PlanarGraph.from_coordinates([(0, 0), (1, 0), (0, 1)], [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)])
    assert G.is_triangulated()
    assert G.triangulate() is G


def test_four_cycle_chords():
    G = square()
    T = G.triangulate()
    # both faces of the embedded 4-cycle are quadrilaterals, so each gets a chord
    assert T.m - G.m == 2 and T.is_triangulated() and T.euler_ok()
    assert all(w == G.sentinel_weight() for _, _, w in T.edges[G.m:])
    assert G.sentinel_weight() == 5 * 3.0
    assert triangulation_preserves_distances(G)
    D = T.metric().pairwise(np.arange(4))
    assert np.array_equal(D, G.metric().pairwise(np.arange(4)))


@pytest.mark.parametrize("seed", range(20))
def test_triangulation_preserves_all_pairs(seed):
    n = 5 + seed % 26
    G, _ = delaunay_planar(n, seed, keep=0.3)
    T = G.triangulate()
    assert T.is_triangulated() and T.euler_ok()
    assert T.m == 3 * n - 6
    before = fw(n, G.edges)
    after = T.metric().pairwise(np.arange(n))
    assert np.allclose(after, before, rtol=1e-12, atol=0)


def test_grid_roundtrip_through_edge_rotation():
    G, _ = grid_planar(3, 4)
    H = PlanarGraph.from_edge_rotation(G.n, G.edges, G.edge_rotation())
    assert H.rotation == G.rotation and H.euler_ok()


def test_bad_rotation_fails_euler():
    # K4 drawn planar, then two darts at one vertex swapped: genus goes up
    coords = [(0, 0), (4, 0), (2, 3), (2, 1)]
    edges = [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (0, 3, 1.0), (1, 3, 1.0), (2, 3, 1.0)]
    G = PlanarGraph.from_coordinates(coords, edges)
    assert G.euler_ok()
    rot = [list(r) for r in G.rotation]
    rot[3][0], rot[3][1] = rot[3][1], rot[3][0]
    bad = PlanarGraph(4, edges, rot)
    assert not bad.euler_ok()
    with pytest.raises(DomainError):
        bad.triangulate()


def test_rotation_validation():
    with pytest.raises(DomainError):
        PlanarGraph(2, [(0, 1, 1.0)], [[0], []])
    with pytest.raises(DomainError):
        PlanarGraph(2, [(0, 0, 1.0)], [[0, 1], []])


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 25), st.integers(0, 10_000), st.floats(0.0, 1.0))
def test_triangulation_property(n, seed, keep):
    G, _ = delaunay_planar(n, seed, keep)
    T = G.triangulate()
    assert T.is_triangulated()
    assert np.allclose(T.metric().pairwise(np.arange(n)), G.metric().pairwise(np.arange(n)), rtol=0, atol=0)
