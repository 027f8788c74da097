import numpy as np
import pytest

from kzcoreset.errors import DomainError, ParseError
from kzcoreset.io import dumps, euclidean_instance, graph_points, read_graph, read_points, write_graph, write_points


def test_points_roundtrip(tmp_path):
    p = tmp_path / "p.csv"
    coords = np.array([[0.1, 2.0], [3.5, -1.25]])
    write_points(p, [0, 1], [1.5, 2.0], coords=coords)
    t = read_points(p)
    assert t.euclidean and t.ids == [0, 1]
    assert np.array_equal(t.coords, coords)
    metric, X = euclidean_instance(t)
    assert X.weights.tolist() == [1.5, 2.0]
    assert metric.distance(0, 1) == pytest.approx(np.linalg.norm(coords[0] - coords[1]))


def test_ambient_ids_must_tile(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_points(a, [0, 2], [1, 1], coords=[[0.0], [1.0]])
    write_points(b, [3], [1], coords=[[2.0]])
    with pytest.raises(DomainError):
        euclidean_instance(read_points(a), read_points(b))


@pytest.mark.parametrize("body, line", [
    ("id,weight,c1\n0,1,x\n", 2),
    ("id,weight,c1\n0,-1,0\n", 2),
    ("id,weight,c1\n0,1,0\n1,1\n", 3),
    ("id,weight,c1\n", 1),
    ("idx,w\n0,1\n", 1),
])
def test_points_parse_errors_are_anchored(tmp_path, body, line):
    p = tmp_path / "bad.csv"
    p.write_text(body)
    with pytest.raises(ParseError) as exc:
        read_points(p)
    assert exc.value.line == line
    assert f"bad.csv:{line}:" in str(exc.value)


def test_graph_roundtrip_with_rotation(tmp_path):
    p = tmp_path / "g.txt"
    edges = [(0, 1, 1.0), (1, 2, 2.5), (0, 2, 0.5)]
    rot = {0: [0, 2], 1: [1, 0], 2: [2, 1]}
    write_graph(p, 3, edges, rot)
    g = read_graph(p)
    assert g.n == 3 and g.edges == edges and g.rotation == rot
    assert g.metric().distance(1, 2) == 1.5


@pytest.mark.parametrize("body, line", [
    ("3 2\n", 1),
    ("p 3 2\n0 1 1\n", 2),
    ("p 2 1\n0 5 1\n", 2),
    ("p 2 1\n0 1 -1\n", 2),
    ("p 2 1\n0 1 1\nr 0 4\n", 3),
])
def test_graph_parse_errors(tmp_path, body, line):
    p = tmp_path / "g.txt"
    p.write_text(body)
    with pytest.raises(ParseError) as exc:
        read_graph(p)
    assert exc.value.line == line


def test_graph_points_merge_by_vertex(tmp_path):
    p = tmp_path / "gp.csv"
    write_points(p, [0, 1, 2], [1.0, 2.0, 0.5], vertices=[3, 1, 3])
    X = graph_points(read_points(p), 4)
    assert X.points.tolist() == [1, 3] and X.weights.tolist() == [2.0, 1.5]
    with pytest.raises(DomainError):
        graph_points(read_points(p), 3)


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [0.1]}) == dumps({"a": [0.1], "b": 1})
    assert dumps({}).endswith("\n")
    with pytest.raises(ValueError):
        dumps({"x": float("nan")})
