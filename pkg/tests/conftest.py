import numpy as np
import pytest

from kzcoreset.metric import EuclideanMetric, WeightedPointSet


def line(*xs):
    """Points on the real line as a 1-d Euclidean metric."""
    return EuclideanMetric(np.asarray(xs, dtype=float)[:, None])


@pytest.fixture
def line3():
    # X = {0, 1, 3} with unit weights, candidates are the three points
    return line(0, 1, 3), WeightedPointSet([0, 1, 2])
