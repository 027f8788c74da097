"""Sensitivity estimates and importance-sampling coresets.

The estimate for a point ``x`` under a bicriteria solution ``C*`` is

    sigma(x) = w(x) * ( d(x, C*)^z / cost_z(X, C*) + 1 / w(cluster of x) )

and a coreset is drawn by sampling points i.i.d. proportional to sigma and
reweighting each draw by ``w(x) / (p_x N)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UnsupportedConfiguration
from .metric import ClusteringParams, Metric, WeightedPointSet
from .rng import child_seed, stream
from .solvers import BicriteriaSolution, bicriteria_approx

# draws are generated in fixed-size chunks so memory stays bounded for huge N
_DRAW_CHUNK = 1 << 20


@dataclass
class SensitivityProfile:
    points: np.ndarray
    sigma: np.ndarray
    sigma_total: float
    base_solution: BicriteriaSolution
    assignment: np.ndarray
    cluster_weight: dict[int, float]
    base_cost: float

    def bound(self) -> float:
        """``1 + alpha k`` for the base solution."""
        return 1.0 + self.base_solution.alpha * self.base_solution.k

    def probabilities(self) -> np.ndarray:
        p = self.sigma / self.sigma_total
        return p / p.sum()


@dataclass
class Coreset:
    points: np.ndarray
    weights: np.ndarray
    provenance: dict = field(default_factory=dict)
    probabilities: np.ndarray | None = None

    @property
    def size(self) -> int:
        return len(self.points)

    def as_weighted_set(self) -> WeightedPointSet:
        return WeightedPointSet(self.points, self.weights)

    def to_dict(self):
        return {
            "entries": [{"id": int(p), "weight": float(w)} for p, w in zip(self.points, self.weights)],
            "provenance": dict(self.provenance),
        }

    @classmethod
    def from_dict(cls, data):
        entries = data["entries"]
        pts = np.array([int(e["id"]) for e in entries], dtype=np.int64)
        ws = np.array([float(e["weight"]) for e in entries])
        if np.any(ws < 0) or not np.all(np.isfinite(ws)):
            raise DomainError("coreset weights must be finite and nonnegative")
        keep = ws > 0
        return cls(pts[keep], ws[keep], dict(data.get("provenance", {})))


def compute_sensitivities(X: WeightedPointSet, metric: Metric, params: ClusteringParams,
                          base: BicriteriaSolution) -> SensitivityProfile:
    if not base.centers:
        raise DomainError("base solution has no centers")
    z = params.z
    dist, nearest = metric.nearest_in(X.points, base.centers)
    dz = dist ** z
    total = float((X.weights * dz).sum())
    cluster_weight: dict[int, float] = {}
    for c, w in zip(nearest, X.weights):
        cluster_weight[int(c)] = cluster_weight.get(int(c), 0.0) + float(w)
    cw = np.array([cluster_weight[int(c)] for c in nearest])
    # a zero-cost base solution makes the first term 0/0; its limit is 0
    first = X.weights * dz / total if total > 0 else np.zeros(X.size)
    sigma = first + X.weights / cw
    return SensitivityProfile(
        points=X.points.copy(),
        sigma=sigma,
        sigma_total=float(sigma.sum()),
        base_solution=base,
        assignment=nearest,
        cluster_weight=cluster_weight,
        base_cost=total,
    )


def choose_sample_size(params: ClusteringParams, sdim_proxy: float, constant: float) -> int:
    """``ceil(c eps^-2 2^(2z) k (z k log2(k+1) sdim + ln(1/delta)))``."""
    if not sdim_proxy > 0:
        raise DomainError("sdim_proxy must be positive")
    k, z, eps, delta = params.k, params.z, params.epsilon, params.delta
    value = constant * eps ** -2 * 2 ** (2 * z) * k * (z * k * math.log2(k + 1) * sdim_proxy + math.log(1 / delta))
    return max(1, math.ceil(value))


def choose_sample_size_additive(params: ClusteringParams, sdim_proxy: float, constant: float,
                                hoeffding_constant: float = 1.0) -> int:
    """Additive-variant size: the k-median term plus ``k^2 ln(1/delta)``."""
    if not sdim_proxy > 0:
        raise DomainError("sdim_proxy must be positive")
    k, eps, delta = params.k, params.epsilon, params.delta
    main = constant * eps ** -2 * k * (k * math.log2(k + 1) * sdim_proxy + math.log(1 / delta))
    return max(1, math.ceil(main + hoeffding_constant * k * k * math.log(1 / delta)))


def draw_counts(p: np.ndarray, N: int, seed: int) -> np.ndarray:
    """Multiplicity of each index among ``N`` i.i.d. draws from ``p``.

    Draw ``i`` inverts the cdf at the ``i``-th uniform of ``stream(seed, 1)``.
    """
    cdf = np.cumsum(p)
    cdf /= cdf[-1]
    cdf[-1] = 1.0
    rng = stream(seed, 1)
    counts = np.zeros(len(p), dtype=np.int64)
    left = N
    while left > 0:
        m = min(left, _DRAW_CHUNK)
        idx = np.searchsorted(cdf, rng.random(m), side="right")
        counts += np.bincount(idx, minlength=len(p))
        left -= m
    return counts


def _sample(X: WeightedPointSet, profile: SensitivityProfile, N: int, seed: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if N < 1:
        raise DomainError("sample size must be at least 1")
    if not np.array_equal(profile.points, X.points):
        raise DomainError("profile was computed for a different point set")
    p = profile.probabilities()
    counts = draw_counts(p, int(N), seed)
    hit = counts > 0
    weights = counts[hit] * X.weights[hit] / (p[hit] * N)
    return X.points[hit], weights, p


def sample_coreset_multiplicative(X: WeightedPointSet, metric: Metric, params: ClusteringParams,
                                  profile: SensitivityProfile, N: int, seed: int) -> Coreset:
    pts, ws, p = _sample(X, profile, N, seed)
    prov = {"seed": int(seed), "N": int(N), "epsilon": params.epsilon,
            "delta": params.delta, "algorithm": "multiplicative"}
    return Coreset(pts, ws, prov, p)


def sample_coreset_additive(X: WeightedPointSet, metric: Metric, params: ClusteringParams,
                            profile: SensitivityProfile, N: int, seed: int) -> tuple[Coreset, float]:
    """Additive-distortion variant (k-median only).

    Returns the coreset and ``sum_D w_D(x) d(x, C*) / cost(X, C*)``, the
    weak-coreset ratio on the fixed base solution.
    """
    if params.z != 1:
        raise UnsupportedConfiguration("the additive variant is defined for z = 1 only")
    pts, ws, p = _sample(X, profile, N, seed)
    prov = {"seed": int(seed), "N": int(N), "epsilon": params.epsilon,
            "delta": params.delta, "algorithm": "additive"}
    D = Coreset(pts, ws, prov, p)
    return D, weak_coreset_ratio(D, metric, profile)


def weak_coreset_ratio(D: Coreset, metric: Metric, profile: SensitivityProfile) -> float:
    num = float(D.weights @ metric.nearest_in(D.points, profile.base_solution.centers)[0])
    den = profile.base_cost
    if den == 0:
        # D is a subset of X, so its cost on C* vanishes as well
        return 1.0 if num == 0 else math.inf
    return num / den


def build_coreset(X: WeightedPointSet, metric: Metric, params: ClusteringParams, seed: int,
                  algorithm: str = "multiplicative", sdim_proxy: float = 1.0, constant: float = 1.0,
                  hoeffding_constant: float = 1.0, N: int | None = None, alpha: float = 2.0) -> Coreset:
    """Bicriteria solution, sensitivities and one importance-sampling pass."""
    base = bicriteria_approx(X, metric, params, seed=child_seed(seed, 0), alpha=alpha)
    profile = compute_sensitivities(X, metric, params, base)
    draw_seed = child_seed(seed, 1)
    if algorithm == "multiplicative":
        n = N or choose_sample_size(params, sdim_proxy, constant)
        D = sample_coreset_multiplicative(X, metric, params, profile, n, draw_seed)
    elif algorithm == "additive":
        n = N or choose_sample_size_additive(params, sdim_proxy, constant, hoeffding_constant)
        D, ratio = sample_coreset_additive(X, metric, params, profile, n, draw_seed)
        D.provenance["weak_coreset_ratio"] = ratio
    else:
        raise DomainError(f"unknown sampling algorithm {algorithm!r}")
    D.provenance["seed"] = int(seed)
    return D
