import numpy as np
import pytest

from conftest import line
from kzcoreset.errors import BudgetError, DomainError
from kzcoreset.harness import (
    Certifier,
    CoresetReport,
    ball_count_bruteforce,
    certify_coreset,
    enumerate_ball_system,
    sigma_star,
)
from kzcoreset.instances import random_euclidean, random_graph_instance
from kzcoreset.metric import EuclideanMetric, WeightedPointSet, cost
from kzcoreset.sensitivity import Coreset


def as_coreset(X, w=None):
    return Coreset(X.points.copy(), X.weights.copy() if w is None else np.asarray(w, dtype=float))


@pytest.mark.parametrize("graph", [False, True])
def test_identity_coreset_has_zero_error(graph):
    m, X = random_graph_instance(10, 8, 1) if graph else random_euclidean(10, 2, 8, 1)
    rep = certify_coreset(X, as_coreset(X), m, 2, 2.0, 0.0)
    assert rep.max_relative_error == 0 and rep.passed
    assert rep.enumerated_count == 55 and rep.mode == "exhaustive"


def test_perturbed_weight_closed_form():
    m, X = line(0, 1, 3), WeightedPointSet([0, 1, 2])
    gamma = 0.3
    w = X.weights.copy()
    w[2] *= 1 + gamma
    rep = certify_coreset(X, as_coreset(X, w), m, 1, 1.0, 1.0)
    # error(C) = gamma * d(3, C) / cost(X, C); worst single center is 0: 3 / 4
    shares = [3 / 4, 2 / 3, 0 / 5]
    assert rep.max_relative_error == pytest.approx(gamma * max(shares), rel=1e-14)
    assert rep.argmax_center_set == (0,)
    best, _ = sigma_star(X, m, 1, 1.0)
    assert rep.max_relative_error == pytest.approx(gamma * best[2], rel=1e-14)


def test_zero_cost_sets_checked_exactly():
    m = line(0, 1, 5)
    X = WeightedPointSet([0, 1])
    rep = certify_coreset(X, as_coreset(X, [1.0, 1.2]), m, 2, 1.0, 0.5)
    assert rep.zero_cost_sets == 1 and rep.zero_cost_mismatches == 0
    # sets leaving only point 1 uncovered see exactly its 20% weight shift
    assert rep.max_relative_error == pytest.approx(0.2, rel=1e-12)
    assert rep.passed
    assert not certify_coreset(X, as_coreset(X, [1.0, 1.2]), m, 2, 1.0, 0.1).passed
    with pytest.raises(DomainError):
        Certifier(X, m, 1).certify(Coreset(np.array([2]), np.array([1.0])), 0.1)


def test_error_invariant_under_distance_scaling():
    m, X = random_euclidean(9, 2, 7, seed=4)
    D = as_coreset(X, X.weights * np.linspace(0.8, 1.2, 7))
    a = certify_coreset(X, D, m, 2, 2.0, 1.0)
    b = certify_coreset(X, D, EuclideanMetric(m.coords * 37.0), 2, 2.0, 1.0)
    assert a.max_relative_error == pytest.approx(b.max_relative_error, rel=1e-9)
    assert a.argmax_center_set == b.argmax_center_set


def test_certifier_matches_direct_costs():
    m, X = random_graph_instance(9, 6, seed=2)
    cert = Certifier(X, m, 2, 1.0)
    sets = [(c,) for c in range(9)] + [(a, b) for a in range(9) for b in range(a + 1, 9)]
    assert np.allclose(cert.x_costs, [cost(X, C, m) for C in sets], rtol=1e-12)


def test_sampled_fallback_is_flagged():
    m, X = random_euclidean(30, 2, 8, seed=0)
    cert = Certifier(X, m, 3, budget=100, samples=50)
    assert cert.mode == "sampled"
    rep = cert.certify(as_coreset(X), 0.1)
    assert rep.mode == "sampled" and rep.max_relative_error == 0
    assert rep.to_dict()["mode"] == "sampled"


def test_report_formats():
    rep = CoresetReport(0.125, (1, 4), 66, 0.2, True)
    assert rep.to_dict()["pass"] is True
    assert rep.csv_row() == ["0.125", "1 4", "66", "0.2", "1", "exhaustive", "0", "0"]


def test_sigma_star_budget():
    m, X = random_euclidean(40, 2, 5, seed=0)
    with pytest.raises(BudgetError):
        sigma_star(X, m, 3, 1.0, budget=10)


def test_ball_counts():
    assert enumerate_ball_system(np.array([[1.0, 2.0, 3.0]])).distinct_ball_count == 2
    xs = np.array([0.0, 1.0, 3.5, 7.0, 12.0])
    rows = np.abs(xs[:, None] - xs[None, :])
    c = enumerate_ball_system(rows)
    assert c.distinct_ball_count <= 5 * 6
    assert c.distinct_ball_count == ball_count_bruteforce(rows)
    rng = np.random.default_rng(0)
    for _ in range(20):
        r = rng.integers(0, 6, size=(7, 5)).astype(float)
        v = rng.uniform(0.5, 2, size=7)
        assert enumerate_ball_system(r, v).distinct_ball_count == ball_count_bruteforce(r, v)
