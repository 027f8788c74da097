import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kzcoreset.errors import DomainError
from kzcoreset.instances import random_euclidean
from kzcoreset.metric import ClusteringParams
from kzcoreset.reduction import (
    base_size_coefficient,
    build_schedule,
    iterative_reduce,
    log_tower,
    sampling_base,
)
from kzcoreset.sensitivity import Coreset, build_coreset, choose_sample_size

P = ClusteringParams(2, 1.0, 0.2, 0.1)


def identity(Y, eps, delta, seed):
    return Coreset(Y.points.copy(), Y.weights.copy(), {"seed": seed})


def test_threshold_above_n0_gives_empty_schedule():
    s = build_schedule(1000, P, 2.0, 10.0)
    assert s.threshold > 1000 and s.t == 0 and s.eps_sequence == []
    assert s.product() == 1 and s.accumulated_epsilon() == pytest.approx(0.2)


def test_huge_tower():
    n0 = 2 ** 65536
    assert log_tower(n0, 0)[:5] == [n0, 65536.0, 16.0, 4.0, 2.0]
    s = build_schedule(n0, P, 1.0, 1e-9)
    # M = max(tiny, rho 2^(rho+1)) = 4
    assert s.threshold == 4
    assert s.t == 4
    assert s.eps_sequence == [0.2 / 65536, 0.2 / 16, 0.2 / 4, 0.2 / 2]
    assert s.doubling_violations() == [] and s.product_ok()
    assert int(s.to_dict()["n0"], 16) == n0


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10 ** 30) | st.sampled_from([2 ** 1000, 2 ** 65536]),
       st.floats(0.01, 0.49), st.floats(1.0, 4.0), st.floats(1e-6, 5.0))
def test_schedule_invariants(n0, eps, rho, s_of_k):
    s = build_schedule(n0, ClusteringParams(1, 1.0, eps, 0.1), rho, s_of_k)
    assert len(s.eps_sequence) == s.t
    assert all(s.tower[i] >= s.threshold for i in range(s.t))
    assert s.t == len(s.tower) or s.tower[s.t] < s.threshold
    assert s.doubling_violations() == []
    assert s.product() <= math.exp(2 * s.eps_sequence[-1]) + 1e-12 if s.t else True
    assert s.product_ok()


def test_schedule_validation():
    with pytest.raises(DomainError):
        build_schedule(0, P, 2.0, 1.0)
    with pytest.raises(DomainError):
        build_schedule(10, P, 0.5, 1.0)
    with pytest.raises(DomainError):
        build_schedule(10, P, 2.0, 0.0)


def test_identity_base_stops_after_one_step():
    m, X = random_euclidean(12, 2, 10, seed=0)
    run = iterative_reduce(X, m, P, identity, 1.0, 1e-9, seed=3)
    assert run.schedule.t >= 1
    assert run.stopped_early
    assert run.coreset.points.tolist() == X.points.tolist()
    assert run.coreset.weights.tolist() == X.weights.tolist()
    # one discarded step, then the final call
    assert len(run.step_eps) == 2 and run.step_eps[-1] == P.epsilon
    assert run.realized_sizes == [10, 10]
    assert run.within_budget


def test_t_zero_is_a_single_base_call():
    m, X = random_euclidean(12, 2, 10, seed=1)
    calls = []

    def base(Y, eps, delta, seed):
        calls.append((Y.size, eps, delta))
        return identity(Y, eps, delta, seed)

    run = iterative_reduce(X, m, P, base, 2.0, 100.0, seed=0)
    assert run.schedule.t == 0 and calls == [(10, 0.2, 0.1)]
    assert run.dump()["delta_spent"] == 0.1


def test_delta_rule_uses_realized_sizes():
    m, X = random_euclidean(40, 2, 40, seed=2)

    def halve(Y, eps, delta, seed):
        keep = max(1, Y.size // 2)
        return Coreset(Y.points[:keep], Y.weights[:keep] * (Y.size / keep))

    run = iterative_reduce(X, m, P, halve, 1.0, 1e-9, seed=0)
    sizes = run.realized_sizes
    assert run.step_delta[:-1] == [P.delta / n for n in sizes[:len(run.step_delta) - 1]]
    assert run.delta_spent <= run.delta_total
    d = run.dump()
    assert d["eps"] == run.schedule.eps_sequence and d["realized_sizes"] == sizes


def test_base_size_coefficient():
    assert base_size_coefficient(2, 1.0, 0.2, 0.25) == pytest.approx(0.2 * 4 * 1 * 4 * math.log2(3) * 0.25)


def test_sampling_base_clamps_delta():
    m, X = random_euclidean(12, 2, 10, seed=3)
    base = sampling_base(m, P, 0.2, 0.25)
    D = base(X, 0.1, 0.9, 5)
    assert D.provenance["delta"] == 0.49


def test_iterative_beats_single_shot_at_scale():
    # base size grows with log ||X||_0, so shrinking first pays off
    m, X = random_euclidean(10_000, 2, 10_000, seed=1)
    s = base_size_coefficient(2, 1.0, 0.2, 0.25)
    run = iterative_reduce(X, m, P, sampling_base(m, P, 0.2, 0.25), 2.0, s, seed=0)
    assert run.schedule.t >= 1
    single = build_coreset(X, m, P, 0, N=choose_sample_size(P, 0.25 * math.log2(X.size), 0.2))
    assert run.coreset.size < single.size
    assert run.coreset.provenance["algorithm"] == "iterative"
