"""Coresets for (k, z)-clustering in Euclidean and graph metrics, with
exhaustive certification at small scale."""

from .embedding import ProjectionEmbedding, build_embedding, embedded_metric
from .errors import BudgetError, DomainError, EmbeddingError, ParseError, UnsupportedConfiguration
from .harness import Certifier, CoresetReport, certify_coreset, certify_sensitivities, enumerate_ball_system
from .metric import (
    ClusteringParams,
    EuclideanMetric,
    GraphMetric,
    MatrixMetric,
    Metric,
    WeightedPointSet,
    cost,
    power_triangle_check,
)
from .reduction import ReductionSchedule, build_schedule, iterative_reduce, sampling_base
from .sensitivity import (
    Coreset,
    SensitivityProfile,
    build_coreset,
    choose_sample_size,
    choose_sample_size_additive,
    compute_sensitivities,
    sample_coreset_additive,
    sample_coreset_multiplicative,
)
from .solvers import bicriteria_approx, brute_force_opt, fpt_solve

__version__ = "0.1.0"

__all__ = [
    "ProjectionEmbedding", "build_embedding", "embedded_metric",
    "BudgetError", "DomainError", "EmbeddingError", "ParseError", "UnsupportedConfiguration",
    "Certifier", "CoresetReport", "certify_coreset", "certify_sensitivities", "enumerate_ball_system",
    "ClusteringParams", "EuclideanMetric", "GraphMetric", "MatrixMetric", "Metric", "WeightedPointSet",
    "cost", "power_triangle_check",
    "ReductionSchedule", "build_schedule", "iterative_reduce", "sampling_base",
    "Coreset", "SensitivityProfile", "build_coreset", "choose_sample_size", "choose_sample_size_additive",
    "compute_sensitivities", "sample_coreset_additive", "sample_coreset_multiplicative",
    "bicriteria_approx", "brute_force_opt", "fpt_solve",
]
