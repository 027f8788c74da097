"""Gaussian random projection with one-sided distortion verified on X x V.

The projection is checked on every pair ``(x, c)`` with ``x`` in X and
``c`` among the candidate centers and X itself.  A post-scale lifts the
smallest ratio to at least 1, so the embedded distances never undercut the
true ones on that finite set, and the projection is redrawn until the
largest ratio is within ``1 + eps``.
"""

from __future__ import annotations

import base64
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmbeddingError
from .metric import EuclideanMetric, WeightedPointSet
from .rng import stream


def target_dimension(n: int, epsilon: float, c_jl: float) -> int:
    """``ceil(c_jl eps^-2 ln(max(n, 2)))``."""
    return math.ceil(c_jl * epsilon ** -2 * math.log(max(n, 2)))


@dataclass
class ProjectionEmbedding:
    source_dim: int
    target_dim: int
    matrix: np.ndarray
    post_scale: float
    epsilon: float
    epsilon_eff: float
    verified_distortion: float
    min_ratio: float
    seed: int
    attempt: int

    def project(self, coords: np.ndarray) -> np.ndarray:
        return self.post_scale * (np.asarray(coords, dtype=float) @ self.matrix.T)

    def to_dict(self):
        raw = np.ascontiguousarray(self.matrix, dtype="<f8").tobytes()
        return {
            "source_dim": self.source_dim,
            "target_dim": self.target_dim,
            "matrix_b64": base64.b64encode(raw).decode("ascii"),
            "post_scale": self.post_scale,
            "epsilon": self.epsilon,
            "epsilon_eff": self.epsilon_eff,
            "verified_distortion": self.verified_distortion,
            "min_ratio": self.min_ratio,
            "seed": self.seed,
            "attempt": self.attempt,
        }

    @classmethod
    def from_dict(cls, d):
        raw = base64.b64decode(d["matrix_b64"])
        mat = np.frombuffer(raw, dtype="<f8").reshape(d["target_dim"], d["source_dim"]).astype(float)
        return cls(d["source_dim"], d["target_dim"], mat, d["post_scale"], d["epsilon"],
                   d["epsilon_eff"], d["verified_distortion"], d["min_ratio"], d["seed"], d["attempt"])


def _ratios(orig: np.ndarray, emb: np.ndarray) -> np.ndarray:
    # pairs with d = 0 coincide in both spaces and carry no ratio
    mask = orig > 0
    return emb[mask] / orig[mask]


def gaussian_matrix(seed: int, attempt: int, t: int, m: int) -> np.ndarray:
    return stream(seed, attempt).standard_normal((t, m)) / math.sqrt(t)


def build_embedding(X: WeightedPointSet, metric: EuclideanMetric, ambient_centers, epsilon: float,
                    seed: int, max_retries: int = 3, c_jl: float = 16.0) -> ProjectionEmbedding:
    """Draw, verify and rescale projections until ``max f/d - 1 <= epsilon``.

    Attempt ``a`` uses ``stream(seed, a)``; at most ``1 + max_retries``
    attempts are made.  Raises :class:`EmbeddingError` with the best
    achieved distortion when all of them fail.
    """
    if not isinstance(metric, EuclideanMetric):
        raise DomainError("projection embedding needs a Euclidean metric")
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    xs = metric.check_ids(X.points)
    cs = np.union1d(metric.check_ids(np.asarray(list(ambient_centers), dtype=np.int64)), xs)
    m = metric.dimension
    t = target_dimension(X.size, epsilon, c_jl)
    orig = metric.pairwise(xs, cs)
    best = math.inf
    for attempt in range(max_retries + 1):
        G = gaussian_matrix(seed, attempt, t, m)
        P = metric.coords @ G.T
        r = _ratios(orig, EuclideanMetric(P).pairwise(xs, cs))
        if r.size == 0:
            scale, lo, hi, dev = 1.0, 1.0, 1.0, 0.0
        else:
            dev = float(np.abs(r - 1).max())
            scale = max(1.0, 1.0 / float(r.min()))
            # confirm f >= d through the same arithmetic the embedded metric uses
            for _ in range(8):
                er = _ratios(orig, EuclideanMetric(scale * P).pairwise(xs, cs))
                if er.min() >= 1.0:
                    break
                scale = float(np.nextafter(scale / er.min(), math.inf))
            lo, hi = float(er.min()), float(er.max())
        eps_eff = hi - 1.0
        best = min(best, eps_eff)
        if eps_eff <= epsilon:
            return ProjectionEmbedding(m, t, G, float(scale), epsilon, eps_eff, dev, lo, int(seed), attempt)
    raise EmbeddingError(f"no projection within distortion {epsilon} after {max_retries + 1} attempts", best)


def embedded_metric(embedding: ProjectionEmbedding, metric: EuclideanMetric) -> EuclideanMetric:
    """Euclidean metric on the projected, post-scaled coordinates (same ids)."""
    if embedding.source_dim != metric.dimension:
        raise DomainError("embedding and metric dimensions differ")
    return EuclideanMetric(embedding.project(metric.coords))


def distortion_on(embedding: ProjectionEmbedding, metric: EuclideanMetric, xs, cs) -> tuple[float, float]:
    """``(min f/d, max f/d)`` over the given pairs with positive distance."""
    emb = embedded_metric(embedding, metric)
    r = _ratios(metric.pairwise(xs, cs), emb.pairwise(xs, cs))
    if r.size == 0:
        return 1.0, 1.0
    return float(r.min()), float(r.max())
