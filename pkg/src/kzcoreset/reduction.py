"""Iterative size reduction: re-coreset the previous coreset at a rising
accuracy schedule, then finish with one call at the target accuracy."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import DomainError
from .metric import ClusteringParams, Metric, WeightedPointSet
from .rng import child_seed
from .sensitivity import Coreset, build_coreset, choose_sample_size

# base(X, epsilon, delta, seed) -> Coreset that is a weighted subset of X
BaseConstructor = Callable[[WeightedPointSet, float, float, int], Coreset]


def log_tower(n0, limit: float) -> list[float]:
    """``[n0, log2 n0, log2 log2 n0, ...]`` while the entries stay ``>= limit``.

    The first entry below ``limit`` is included too, and iteration stops at
    any value ``<= 1``.  ``n0`` may be an arbitrarily large ``int``.
    """
    tower = [n0]
    while tower[-1] >= limit and tower[-1] > 1:
        tower.append(math.log2(tower[-1]))
    return tower


@dataclass
class ReductionSchedule:
    n0: int
    epsilon: float
    delta: float
    rho: float
    s_of_k: float
    threshold: float
    t: int
    eps_sequence: list[float]
    tower: list = field(repr=False)

    def delta_for(self, size: int) -> float:
        """``delta_i = delta / ||X_{i-1}||_0`` for the realized input size."""
        return self.delta / max(int(size), 1)

    def product(self) -> float:
        return math.prod(1 + e for e in self.eps_sequence)

    def accumulated_epsilon(self) -> float:
        """``prod(1 + eps_i) (1 + eps) - 1``."""
        return self.product() * (1 + self.epsilon) - 1

    def doubling_violations(self) -> list[int]:
        """Indices ``i`` with ``log^(i) n >= rho 2^(rho+1)`` but ``eps_{i+1} < 2 eps_i``."""
        floor = self.rho * 2 ** (self.rho + 1)
        bad = []
        for i in range(1, self.t):
            if self.tower[i] >= floor and self.eps_sequence[i] < 2 * self.eps_sequence[i - 1]:
                bad.append(i)
        return bad

    def product_ok(self) -> bool:
        return self.product() <= 1 + 10 * self.epsilon

    def to_dict(self):
        return {
            # beyond float precision the exact value goes out as hex text
            "n0": hex(self.n0) if self.n0 > 2 ** 53 else int(self.n0),
            "epsilon": self.epsilon,
            "delta": self.delta,
            "rho": self.rho,
            "s_of_k": self.s_of_k,
            "threshold": self.threshold,
            "t": self.t,
            "eps": list(self.eps_sequence),
        }


def build_schedule(n0: int, params: ClusteringParams, rho: float, s_of_k: float) -> ReductionSchedule:
    """Accuracy schedule ``eps_i = eps / (log^(i) n0)^(1/rho)``, ``i = 1..t``.

    ``t`` is the largest integer with ``log^(t-1) n0 >= M`` where
    ``M = max(20 eps^-rho s(k) log2(1/delta), rho 2^(rho+1))``.
    """
    if int(n0) != n0 or n0 < 1:
        raise DomainError("n0 must be a positive integer")
    if not rho >= 1:
        raise DomainError("rho must be >= 1")
    if not s_of_k > 0:
        raise DomainError("s_of_k must be positive")
    n0 = int(n0)
    eps, delta = params.epsilon, params.delta
    M = max(20 * eps ** -rho * s_of_k * math.log2(1 / delta), rho * 2 ** (rho + 1))
    tower = log_tower(n0, M)
    t = 0
    while t < len(tower) and tower[t] >= M:
        t += 1
    eps_seq = [eps / tower[i] ** (1 / rho) for i in range(1, t + 1)]
    return ReductionSchedule(n0, eps, delta, rho, s_of_k, M, t, eps_seq, tower)


@dataclass
class ReductionRun:
    coreset: Coreset
    schedule: ReductionSchedule
    realized_sizes: list[int]
    step_eps: list[float]
    step_delta: list[float]
    stopped_early: bool
    delta_total: float

    @property
    def delta_spent(self) -> float:
        return sum(self.step_delta)

    @property
    def within_budget(self) -> bool:
        return self.delta_spent <= self.delta_total * (1 + 1e-12)

    def dump(self):
        out = {
            "t": self.schedule.t,
            "eps": list(self.schedule.eps_sequence),
            "realized_sizes": list(self.realized_sizes),
            "delta_spent": self.delta_spent,
            "delta_total": self.delta_total,
            "within_budget": self.within_budget,
            "stopped_early": self.stopped_early,
            "step_eps": list(self.step_eps),
            "step_delta": list(self.step_delta),
        }
        out["schedule"] = self.schedule.to_dict()
        return out


def iterative_reduce(X: WeightedPointSet, metric: Metric, params: ClusteringParams,
                     base: BaseConstructor, rho: float, s_of_k: float, seed: int,
                     delta_total: float | None = None) -> ReductionRun:
    """Chain ``base`` through the schedule, then one final call at ``(eps, delta)``.

    A step whose output is not smaller than its input is discarded and ends
    the schedule; its failure probability is still charged.
    """
    schedule = build_schedule(X.size, params, rho, s_of_k)
    current = X
    sizes = [X.size]
    step_eps, step_delta = [], []
    stopped = False
    for i, eps_i in enumerate(schedule.eps_sequence, start=1):
        delta_i = schedule.delta_for(current.size)
        D = base(current, eps_i, delta_i, child_seed(seed, i))
        step_eps.append(eps_i)
        step_delta.append(delta_i)
        if D.size >= current.size:
            stopped = True
            break
        current = D.as_weighted_set()
        sizes.append(current.size)
    final = base(current, params.epsilon, params.delta, child_seed(seed, schedule.t + 1))
    step_eps.append(params.epsilon)
    step_delta.append(params.delta)
    sizes.append(final.size)
    final.provenance.update({
        "algorithm": "iterative",
        "seed": int(seed),
        "epsilon": params.epsilon,
        "delta": params.delta,
    })
    budget = 2 * params.delta if delta_total is None else delta_total
    return ReductionRun(final, schedule, sizes, step_eps, step_delta, stopped, budget)


def base_size_coefficient(k: int, z: float, constant: float, sdim_coef: float) -> float:
    """``s(k)`` for the sensitivity-sampling base.

    Read off the base's sample size with ``sdim = sdim_coef log2 n``: the
    term multiplying ``log n`` is ``constant 2^(2z) z k^2 log2(k+1) sdim_coef``.
    """
    return constant * 2 ** (2 * z) * z * k * k * math.log2(k + 1) * sdim_coef


def sampling_base(metric: Metric, params: ClusteringParams, constant: float,
                  sdim_coef: float, alpha: float = 2.0) -> BaseConstructor:
    """Multiplicative sensitivity sampling with ``sdim = sdim_coef log2 ||X||_0``."""

    def base(Y: WeightedPointSet, eps: float, delta: float, seed: int) -> Coreset:
        # schedule accuracies can leave the (0, 1/2) range only from below
        p = ClusteringParams(params.k, params.z, eps, min(delta, 0.49))
        sdim = sdim_coef * math.log2(max(Y.size, 2))
        N = choose_sample_size(p, sdim, constant)
        return build_coreset(Y, metric, p, seed, "multiplicative", N=N, alpha=alpha)

    return base
