"""Approximate and exact k-clustering solvers.

``bicriteria_approx`` seeds sensitivity estimation, ``brute_force_opt`` is
the verification oracle, and ``fpt_solve`` solves a (small) weighted
instance exactly by enumerating its partitions into at most k groups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .enumeration import (
    center_set_batches,
    check_budget,
    count_center_sets,
    count_partitions,
    partition_masks,
    set_costs,
)
from .errors import DomainError
from .metric import ClusteringParams, Metric, WeightedPointSet, center_set, cost
from .rng import stream

_MEDOID_BLOCK = 1024


@dataclass
class BicriteriaSolution:
    centers: tuple[int, ...]
    achieved_cost: float
    alpha: float
    k: int
    z: float
    seed: int | None = None
    # cost(X, centers) / OPT when an oracle was consulted, else None
    beta_estimate: float | None = None

    @property
    def beta_verified(self) -> bool:
        return self.beta_estimate is not None

    def to_dict(self):
        return {
            "centers": list(self.centers),
            "cost": self.achieved_cost,
            "k": self.k,
            "z": self.z,
            "method": "bicriteria",
            "seed": self.seed,
            "alpha": self.alpha,
            "beta_estimate": self.beta_estimate if self.beta_estimate is not None else "unverified",
        }


@dataclass
class ExactSolution:
    centers: tuple[int, ...]
    optimal_cost: float
    k: int
    z: float
    method: str
    seed: int | None = None

    def to_dict(self):
        return {
            "centers": list(self.centers),
            "cost": self.optimal_cost,
            "k": self.k,
            "z": self.z,
            "method": self.method,
            "seed": self.seed,
        }


def _draw(rng, weights):
    live = np.flatnonzero(weights > 0)
    cdf = np.cumsum(weights[live])
    cdf /= cdf[-1]
    cdf[-1] = 1.0
    return int(live[np.searchsorted(cdf, rng.random(), side="right")])


def medoid(points, weights, metric: Metric, z: float, candidates=None) -> tuple[int, float]:
    """Ambient point minimising ``sum w(x) d(x, c)^z`` over the given points.

    Ties go to the lowest candidate id.
    """
    cand = np.arange(metric.size) if candidates is None else np.asarray(candidates, dtype=np.int64)
    totals = np.zeros(len(cand))
    for i in range(0, len(points), _MEDOID_BLOCK):
        rows = metric.pairwise(points[i:i + _MEDOID_BLOCK], cand)
        totals += weights[i:i + _MEDOID_BLOCK] @ (rows ** z)
    j = int(np.argmin(totals))
    return int(cand[j]), float(totals[j])


def bicriteria_approx(X: WeightedPointSet, metric: Metric, params: ClusteringParams,
                      seed: int = 0, alpha: float = 2.0, candidates=None) -> BicriteriaSolution:
    """Weighted D^z sampling of ``ceil(alpha k)`` seeds plus one medoid pass.

    Seeds are drawn with probability proportional to ``w(x) d(x, chosen)^z``;
    sampling stops early once every point coincides with a seed.  Each
    resulting cluster's center is then replaced by its best ambient point.
    """
    if X.size == 0:
        raise DomainError("empty data set")
    z = params.z
    limit = math.ceil(alpha * params.k)
    rng = stream(seed, 0)
    chosen = [int(X.points[_draw(rng, X.weights)])]
    mind = metric.pairwise(X.points, [chosen[0]])[:, 0] ** z
    while len(chosen) < limit:
        p = X.weights * mind
        if not p.sum() > 0:
            break
        c = int(X.points[_draw(rng, p)])
        chosen.append(c)
        mind = np.minimum(mind, metric.pairwise(X.points, [c])[:, 0] ** z)

    seeds = center_set(chosen)
    _, nearest = metric.nearest_in(X.points, seeds)
    improved = []
    for c in seeds:
        mask = nearest == c
        if not mask.any():
            continue
        m, _ = medoid(X.points[mask], X.weights[mask], metric, z, candidates)
        improved.append(m)
    centers = center_set(improved)
    return BicriteriaSolution(centers, cost(X, centers, metric, z), alpha, params.k, z, seed)


def brute_force_opt(X: WeightedPointSet, metric: Metric, k: int, z: float = 1.0,
                    budget: int | None = None, candidates=None) -> ExactSolution:
    """Exact minimiser of ``cost_z(X, C)`` over every ``C`` with ``|C| <= k``.

    Ties are broken towards the lexicographically smallest sorted id tuple.
    Raises :class:`BudgetError` instead of approximating.
    """
    cand = np.arange(metric.size) if candidates is None else np.asarray(sorted(set(candidates)), dtype=np.int64)
    check_budget(count_center_sets(len(cand), k), budget)
    table = metric.pairwise(X.points, cand) ** z
    best_cost, best_set = math.inf, None
    for combos in center_set_batches(len(cand), k):
        costs = set_costs(table, X.weights, combos)
        m = costs.min()
        if m > best_cost:
            continue
        for i in np.flatnonzero(costs == m):
            cs = tuple(int(c) for c in cand[combos[i]])
            if m < best_cost or cs < best_set:
                best_cost, best_set = m, cs
    return ExactSolution(best_set, cost(X, best_set, metric, z), k, z, "brute_force")


def fpt_solve(D: WeightedPointSet, metric: Metric, k: int, z: float = 1.0,
              budget: int | None = None, candidates=None) -> ExactSolution:
    """Exact optimum of a weighted instance by partition enumeration.

    Every partition of D's points into at most ``k`` groups is visited once
    (restricted growth order); each group takes its cost-minimising ambient
    center and the cheapest assembly wins.  Intended for coresets, whose
    size keeps the partition count within budget.
    """
    n = D.size
    # the subset table has 2^n rows, the search visits every partition
    check_budget(max(count_partitions(n, k), 1 << n), budget)
    cand = np.arange(metric.size) if candidates is None else np.asarray(sorted(set(candidates)), dtype=np.int64)
    table = (metric.pairwise(D.points, cand) ** z) * D.weights[:, None]

    # per-group cost vectors over all candidates, for every nonempty subset
    group = np.zeros((1 << n, len(cand)))
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        group[mask] = group[mask & (mask - 1)] + table[low]
    best_center = np.argmin(group, axis=1)
    best_value = group[np.arange(1 << n), best_center]

    best_total, best_set = math.inf, None
    for masks in partition_masks(n, k):
        total = sum(best_value[m] for m in masks)
        if total > best_total:
            continue
        cs = tuple(sorted({int(cand[best_center[m]]) for m in masks}))
        if total < best_total or cs < best_set:
            best_total, best_set = total, cs
    return ExactSolution(best_set, cost(D, best_set, metric, z), k, z, "fpt_enumeration")
