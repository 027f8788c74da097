"""Exhaustive verification of coresets, sensitivity bounds and ball counts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .enumeration import center_set_batches, count_center_sets, enumeration_budget, nearest_table
from .errors import BudgetError, DomainError
from .metric import Metric, WeightedPointSet
from .rng import stream
from .sensitivity import SensitivityProfile

# precomputed nearest tables above this many entries are streamed instead
_TABLE_LIMIT = 20_000_000


@dataclass
class CoresetReport:
    max_relative_error: float
    argmax_center_set: tuple[int, ...] | None
    enumerated_count: int
    epsilon_target: float
    passed: bool
    mode: str = "exhaustive"
    zero_cost_sets: int = 0
    zero_cost_mismatches: int = 0
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "max_relative_error": self.max_relative_error,
            "argmax_center_set": None if self.argmax_center_set is None else list(self.argmax_center_set),
            "enumerated_count": self.enumerated_count,
            "epsilon_target": self.epsilon_target,
            "pass": self.passed,
            "mode": self.mode,
            "zero_cost_sets": self.zero_cost_sets,
            "zero_cost_mismatches": self.zero_cost_mismatches,
        }
        out.update(self.extra)
        return out

    CSV_FIELDS = ("max_relative_error", "argmax_center_set", "enumerated_count", "epsilon_target",
                  "pass", "mode", "zero_cost_sets", "zero_cost_mismatches")

    def csv_row(self) -> list[str]:
        d = self.to_dict()
        cs = d["argmax_center_set"]
        d["argmax_center_set"] = "" if cs is None else " ".join(map(str, cs))
        d["pass"] = int(d["pass"])
        return [repr(d[k]) if isinstance(d[k], float) else str(d[k]) for k in self.CSV_FIELDS]


class Certifier:
    """Cost of every center set on X, precomputed once.

    Certifying a coreset ``D`` of X is then one matrix-vector product:
    ``cost(D, C) = sum_x w_D(x) min_{c in C} d(x, c)^z`` with ``w_D = 0``
    outside D.  When ``|V^k|`` exceeds the enumeration budget, ``samples``
    random center sets plus every singleton are used and the report says
    ``sampled``.
    """

    def __init__(self, X: WeightedPointSet, metric: Metric, k: int, z: float = 1.0,
                 budget: int | None = None, candidates=None, samples: int = 2000, seed: int = 0):
        self.X = X
        self.k, self.z = k, z
        self.cand = np.arange(metric.size) if candidates is None else np.asarray(sorted(set(candidates)), dtype=np.int64)
        self.table = metric.pairwise(X.points, self.cand) ** z
        self._index = {int(p): i for i, p in enumerate(X.points)}
        total = count_center_sets(len(self.cand), k)
        if total <= enumeration_budget(budget):
            self.mode = "exhaustive"
            self._batches = list(center_set_batches(len(self.cand), k)) if total * X.size <= _TABLE_LIMIT else None
        else:
            self.mode = "sampled"
            self._batches = self._sample_sets(samples, seed)
        self.count = total if self.mode == "exhaustive" else sum(len(b) for b in self._batches)
        self._near = None
        if self._batches is not None:
            self._near = [nearest_table(self.table, b) for b in self._batches]
        self.x_costs = self._costs(X.weights)

    def _sample_sets(self, samples, seed):
        rng = stream(seed, 0)
        n = len(self.cand)
        sets = [np.arange(n)[:, None]]
        by_size: dict[int, list] = {}
        for _ in range(samples):
            j = int(rng.integers(1, min(self.k, n) + 1))
            by_size.setdefault(j, []).append(np.sort(rng.choice(n, size=j, replace=False)))
        for j in sorted(by_size):
            if j > 1:
                sets.append(np.array(by_size[j], dtype=np.int64))
        return sets

    def _iter_near(self):
        if self._near is not None:
            for b, nt in zip(self._batches, self._near):
                yield b, nt
        else:
            for b in center_set_batches(len(self.cand), self.k):
                yield b, nearest_table(self.table, b)

    def _costs(self, w: np.ndarray) -> np.ndarray:
        return np.concatenate([nt @ w for _, nt in self._iter_near()])

    def _center_set(self, flat_index: int) -> tuple[int, ...]:
        for b, _ in self._iter_near():
            if flat_index < len(b):
                return tuple(int(c) for c in self.cand[b[flat_index]])
            flat_index -= len(b)
        raise IndexError(flat_index)

    def weights_of(self, D) -> np.ndarray:
        w = np.zeros(self.X.size)
        for p, wt in zip(D.points, D.weights):
            i = self._index.get(int(p))
            if i is None:
                raise DomainError(f"coreset point {int(p)} is not in the data set")
            w[i] += wt
        return w

    def certify(self, D, epsilon: float) -> CoresetReport:
        d_costs = self._costs(self.weights_of(D))
        pos = self.x_costs > 0
        zero = ~pos
        mismatch = int(np.count_nonzero(d_costs[zero] != 0))
        if pos.any():
            rel = np.zeros_like(d_costs)
            rel[pos] = np.abs(d_costs[pos] - self.x_costs[pos]) / self.x_costs[pos]
            i = int(np.argmax(rel))
            err = float(rel[i])
            arg = self._center_set(i)
        else:
            err, arg = 0.0, None
        ok = err <= epsilon and mismatch == 0
        return CoresetReport(err, arg, int(self.count), epsilon, bool(ok), self.mode, int(zero.sum()), mismatch)


def certify_coreset(X: WeightedPointSet, D, metric: Metric, k: int, z: float, epsilon: float,
                    budget: int | None = None) -> CoresetReport:
    return Certifier(X, metric, k, z, budget).certify(D, epsilon)


@dataclass
class SensitivityCertificate:
    sigma_hat: np.ndarray
    sigma_star: np.ndarray
    margins: np.ndarray
    beta: float
    sigma_total: float
    total_bound: float
    factor: float

    @property
    def lower_bound_ok(self) -> bool:
        return bool(np.all(self.margins >= -1e-9))

    @property
    def total_ok(self) -> bool:
        return self.sigma_total <= self.total_bound + 1e-9

    @property
    def passed(self) -> bool:
        return self.lower_bound_ok and self.total_ok


def sigma_star(X: WeightedPointSet, metric: Metric, k: int, z: float, budget: int | None = None):
    """Exact ``max_C w(x) d(x, C)^z / cost(X, C)`` over center sets of positive cost.

    Also returns the smallest positive cost over ``V^k``.
    """
    n = metric.size
    need = count_center_sets(n, k)
    if need > enumeration_budget(budget):
        raise BudgetError(need, enumeration_budget(budget))
    table = metric.pairwise(X.points) ** z
    best = np.zeros(X.size)
    opt = math.inf
    for b in center_set_batches(n, k):
        per = nearest_table(table, b) * X.weights
        costs = per.sum(axis=1)
        pos = costs > 0
        if pos.any():
            best = np.maximum(best, (per[pos] / costs[pos, None]).max(axis=0))
            opt = min(opt, float(costs[pos].min()))
    return best, opt


def certify_sensitivities(X: WeightedPointSet, metric: Metric, k: int, z: float,
                          profile: SensitivityProfile, budget: int | None = None) -> SensitivityCertificate:
    """Check ``sigma_hat (beta + 1) 2^(2z-2) >= sigma*`` pointwise and the total bound.

    ``beta`` is ``cost(X, C*)`` over the least positive cost in ``V^k``.
    """
    s_star, opt = sigma_star(X, metric, k, z, budget)
    base = profile.base_cost
    beta = base / opt if math.isfinite(opt) else 0.0
    factor = (beta + 1) * 2 ** (2 * z - 2)
    margins = profile.sigma * factor - s_star
    return SensitivityCertificate(profile.sigma, s_star, margins, beta, profile.sigma_total,
                                  profile.bound(), factor)


@dataclass
class BallSystemCount:
    size_h: int
    distinct_ball_count: int
    exponent_estimate: float

    def to_dict(self):
        return {"H": self.size_h, "distinct_ball_count": self.distinct_ball_count,
                "exponent_estimate": self.exponent_estimate}


def _masks_for_column(vals: np.ndarray) -> set[int]:
    order = np.argsort(vals, kind="stable")
    out = {0}
    mask = 0
    for i, x in enumerate(order):
        mask |= 1 << int(x)
        if i + 1 == len(order) or vals[order[i + 1]] != vals[x]:
            out.add(mask)
    return out


def enumerate_ball_system(rows, v=None) -> BallSystemCount:
    """Distinct balls ``{x : v(x) rows[x, c] <= r}`` over all centers and radii.

    Per center only the prefixes of the sorted column can occur, so the
    count is exact.  The empty ball is included.
    """
    rows = np.asarray(rows, dtype=float)
    vals = rows if v is None else rows * np.asarray(v, dtype=float)[:, None]
    balls: set[int] = set()
    for c in range(vals.shape[1]):
        balls |= _masks_for_column(vals[:, c])
    H = vals.shape[0]
    count = len(balls)
    exp = math.log(count) / math.log(H) if H > 1 else 0.0
    return BallSystemCount(H, count, exp)


def ball_count_bruteforce(rows, v=None) -> int:
    """Oracle: test every radius among the distinct table values."""
    rows = np.asarray(rows, dtype=float)
    vals = rows if v is None else rows * np.asarray(v, dtype=float)[:, None]
    radii = np.concatenate([[-1.0], np.unique(vals)])
    balls = set()
    for c in range(vals.shape[1]):
        for r in radii:
            balls.add(tuple(np.flatnonzero(vals[:, c] <= r)))
    return len(balls)
