import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import line
from kzcoreset.errors import DomainError, UnsupportedConfiguration
from kzcoreset.harness import Certifier, certify_sensitivities
from kzcoreset.instances import random_euclidean, random_graph_instance
from kzcoreset.metric import ClusteringParams, EuclideanMetric, WeightedPointSet, cost
from kzcoreset.sensitivity import (
    Coreset,
    build_coreset,
    choose_sample_size,
    choose_sample_size_additive,
    compute_sensitivities,
    draw_counts,
    sample_coreset_additive,
    sample_coreset_multiplicative,
    weak_coreset_ratio,
)
from kzcoreset.solvers import BicriteriaSolution, bicriteria_approx


def _profile(X, m, k=2, z=1.0, seed=0):
    p = ClusteringParams(k, z)
    return p, compute_sensitivities(X, m, p, bicriteria_approx(X, m, p, seed=seed))


def test_every_point_a_center():
    m, X = random_euclidean(8, 2, 6, seed=0)
    base = BicriteriaSolution(tuple(X.points.tolist()), 0.0, 3.0, 2, 1.0)
    prof = compute_sensitivities(X, m, ClusteringParams(2), base)
    assert np.array_equal(prof.sigma, np.ones(6))
    assert prof.sigma_total == 6 <= 1 + 3.0 * 2


def test_single_cluster_totals_two():
    m = line(0, 1, 2, 5, 9)
    X = WeightedPointSet(range(5))
    base = BicriteriaSolution((2,), cost(X, [2], m), 1.0, 1, 1.0)
    prof = compute_sensitivities(X, m, ClusteringParams(1), base)
    assert prof.sigma_total == pytest.approx(2.0, rel=1e-15)
    assert prof.cluster_weight == {2: 5.0}
    assert prof.sigma_total <= prof.bound()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(1, 3), st.sampled_from([1.0, 1.5, 2.0]), st.integers(0, 9999))
def test_total_bound_and_cluster_weights(n, k, z, seed):
    m, X = random_graph_instance(12, n, seed) if seed % 2 else random_euclidean(12, 2, n, seed)
    _, prof = _profile(X, m, k, z, seed)
    assert np.all(prof.sigma > 0)
    assert prof.sigma_total <= prof.bound() + 1e-9
    for c, w in prof.cluster_weight.items():
        assert w == pytest.approx(X.weights[prof.assignment == c].sum(), rel=1e-12)
    p = prof.probabilities()
    assert np.all(p > 0) and p.sum() == pytest.approx(1.0, abs=1e-15)


def test_lower_bound_on_eight_points():
    m, X = random_euclidean(8, 1, 8, seed=3)
    _, prof = _profile(X, m, 2, 1.0)
    cert = certify_sensitivities(X, m, 2, 1.0, prof)
    assert cert.lower_bound_ok and cert.total_ok
    assert cert.factor == pytest.approx(cert.beta + 1)


def test_margins_invariant_under_weight_scaling():
    m, X = random_euclidean(8, 2, 7, seed=1)
    _, a = _profile(X, m, 2, 2.0)
    Y = X.scaled(7.5)
    _, b = _profile(Y, m, 2, 2.0)
    assert np.allclose(a.sigma, b.sigma, rtol=1e-12)
    ca = certify_sensitivities(X, m, 2, 2.0, a)
    cb = certify_sensitivities(Y, m, 2, 2.0, b)
    assert np.allclose(ca.sigma_star, cb.sigma_star, rtol=1e-12)
    assert np.allclose(ca.margins, cb.margins, rtol=1e-9, atol=1e-12)


def test_sample_size_formula():
    p = ClusteringParams(1, 1.0, 0.2, 0.1)
    assert choose_sample_size(p, 1.0, 1.0) == 331
    assert math.ceil(100 * (1 + math.log(10))) == 331
    half = ClusteringParams(1, 1.0, 0.1, 0.1)
    n1 = 1.0 * 0.2 ** -2 * 4 * (1 + math.log(10))
    assert choose_sample_size(half, 1.0, 1.0) == math.ceil(4 * n1)
    # delta -> delta^2 doubles the ln(1/delta) addend
    sq = ClusteringParams(1, 1.0, 0.2, 0.01)
    assert choose_sample_size(sq, 1.0, 1.0) == math.ceil(100 * (1 + 2 * math.log(10)))
    with pytest.raises(DomainError):
        choose_sample_size(p, 0.0, 1.0)


def test_additive_sample_size_addend():
    p = ClusteringParams(2, 1.0, 0.2, 0.1)
    main = 0.2 * 25 * 2 * (2 * math.log2(3) + math.log(10))
    assert choose_sample_size_additive(p, 1.0, 0.2) == math.ceil(main + 4 * math.log(10))


def test_single_point_coreset_is_exact():
    m = line(0, 4)
    X = WeightedPointSet([1], [2.5])
    p, prof = _profile(X, m, 1)
    D = sample_coreset_multiplicative(X, m, p, prof, 17, seed=4)
    assert D.points.tolist() == [1] and D.weights.tolist() == [2.5]


def test_total_weight_unbiased():
    m, X = random_euclidean(12, 2, 10, seed=2)
    p, prof = _profile(X, m, 2)
    N = 20
    totals = np.array([sample_coreset_multiplicative(X, m, p, prof, N, s).weights.sum() for s in range(10_000)])
    assert abs(totals.mean() / X.total_weight - 1) < 0.01


def test_cost_unbiased_for_fixed_centers():
    m, X = random_graph_instance(12, 10, seed=5)
    p, prof = _profile(X, m, 2, 2.0)
    C = [0, 7]
    target = cost(X, C, m, 2.0)
    vals = np.array([cost(sample_coreset_multiplicative(X, m, p, prof, 15, s).as_weighted_set(), C, m, 2.0)
                     for s in range(4000)])
    se = vals.std(ddof=1) / math.sqrt(len(vals))
    assert abs(vals.mean() - target) <= 3 * se


def test_merging_duplicates_keeps_costs():
    m, X = random_euclidean(10, 2, 6, seed=7)
    p, prof = _profile(X, m, 2)
    N, seed = 40, 3
    D = sample_coreset_multiplicative(X, m, p, prof, N, seed)
    counts = draw_counts(prof.probabilities(), N, seed)
    draws = np.repeat(np.arange(X.size), counts)
    d = m.pairwise(X.points, [2, 5]).min(axis=1)
    raw = sum(X.weights[i] / (prof.probabilities()[i] * N) * d[i] for i in draws)
    assert cost(D.as_weighted_set(), [2, 5], m) == pytest.approx(raw, rel=1e-12)
    assert counts.sum() == N


def test_draws_are_deterministic_and_chunk_independent():
    p = np.full(50, 0.02)
    assert np.array_equal(draw_counts(p, 1000, 5), draw_counts(p, 1000, 5))
    assert not np.array_equal(draw_counts(p, 1000, 5), draw_counts(p, 1000, 6))
    # draw i always uses the i-th uniform, so a prefix run is a prefix of the counts
    a, b = draw_counts(p, 10, 9), draw_counts(p, 11, 9)
    assert np.all(b >= a) and (b - a).sum() == 1


def test_additive_rejects_k_means():
    m, X = random_euclidean(8, 2, 5, seed=0)
    p, prof = _profile(X, m, 2, 2.0)
    with pytest.raises(UnsupportedConfiguration):
        sample_coreset_additive(X, m, p, prof, 10, 0)


def test_weak_ratio_identity_and_scaling():
    m, X = random_euclidean(10, 2, 8, seed=4)
    p, prof = _profile(X, m, 2)
    assert weak_coreset_ratio(Coreset(X.points, X.weights), m, prof) == pytest.approx(1.0, rel=1e-14)
    D, r = sample_coreset_additive(X, m, p, prof, 30, seed=1)
    big = EuclideanMetric(m.coords * 1000.0)
    _, prof2 = _profile(X, big, 2)
    D2, r2 = sample_coreset_additive(X, big, p, prof2, 30, seed=1)
    assert D.points.tolist() == D2.points.tolist()
    assert r2 == pytest.approx(r, rel=1e-9)


def test_zero_cost_base_solution():
    m, X = random_euclidean(6, 2, 3, seed=0)
    p, prof = _profile(X, m, 3)
    assert prof.base_cost == 0
    assert np.array_equal(prof.sigma, np.ones(3))
    D, r = sample_coreset_additive(X, m, p, prof, 5, 0)
    assert r == 1.0


def test_coreset_serialisation():
    D = Coreset(np.array([3, 1]), np.array([2.0, 0.5]), {"seed": 1})
    back = Coreset.from_dict(D.to_dict())
    assert back.points.tolist() == [3, 1] and back.weights.tolist() == [2.0, 0.5]
    doc = D.to_dict()
    doc["entries"][0]["weight"] = 0.0
    assert Coreset.from_dict(doc).points.tolist() == [1]
    doc["entries"][0]["weight"] = -1.0
    with pytest.raises(DomainError):
        Coreset.from_dict(doc)


def test_build_coreset_is_a_weighted_subset_and_deterministic():
    m, X = random_graph_instance(13, 11, seed=9)
    p = ClusteringParams(2, 1.0, 0.2, 0.1)
    a = build_coreset(X, m, p, 42, constant=0.2)
    b = build_coreset(X, m, p, 42, constant=0.2)
    assert a.to_dict() == b.to_dict()
    assert set(a.points.tolist()) <= set(X.points.tolist())
    assert np.all(a.weights > 0)
    assert a.provenance["N"] == choose_sample_size(p, 1.0, 0.2)
    add = build_coreset(X, m, p, 42, algorithm="additive", constant=0.2)
    assert "weak_coreset_ratio" in add.provenance
    with pytest.raises(DomainError):
        build_coreset(X, m, p, 0, algorithm="nope")


def test_twelve_point_guarantee():
    m, X = random_euclidean(12, 2, 12, seed=21)
    p = ClusteringParams(2, 1.0, 0.2, 0.1)
    cert = Certifier(X, m, 2, 1.0)
    ok = sum(cert.certify(build_coreset(X, m, p, s, constant=0.2), 0.2).passed for s in range(200))
    assert ok >= 180
