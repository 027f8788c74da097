"""Exhaustive enumeration of center sets and set partitions."""

from __future__ import annotations

import itertools
import math
import os
from typing import Iterator

import numpy as np

from .errors import BudgetError

DEFAULT_BUDGET = 2_000_000
BUDGET_ENV = "KZCORESET_ENUM_BUDGET"


def enumeration_budget(budget: int | None = None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get(BUDGET_ENV)
    return int(env) if env else DEFAULT_BUDGET


def count_center_sets(n: int, k: int) -> int:
    """``|V^k|``: nonempty subsets of an n-set with at most k elements."""
    return sum(math.comb(n, j) for j in range(1, min(k, n) + 1))


def count_partitions(n: int, k: int) -> int:
    """Set partitions of an n-set into at most k blocks (Stirling sums)."""
    row = [1] + [0] * k  # S(0, j)
    for i in range(1, n + 1):
        row = [0] + [j * row[j] + row[j - 1] for j in range(1, k + 1)]
    return sum(row) if n else 1


def center_set_batches(n: int, k: int, batch: int = 4096) -> Iterator[np.ndarray]:
    """All nonempty subsets of ``range(n)`` of size <= k, as index arrays.

    Sizes are visited in increasing order and each size in lexicographic
    order.  Each yielded array has shape ``(b, j)`` for a single size ``j``.
    """
    for j in range(1, min(k, n) + 1):
        it = itertools.combinations(range(n), j)
        while True:
            chunk = list(itertools.islice(it, batch))
            if not chunk:
                break
            yield np.array(chunk, dtype=np.int64)


def set_costs(table: np.ndarray, weights: np.ndarray, combos: np.ndarray) -> np.ndarray:
    """Clustering cost of each center set in ``combos``.

    ``table[x, v]`` already holds ``d(x, v)^z``.
    """
    return nearest_table(table, combos) @ weights


def nearest_table(table: np.ndarray, combos: np.ndarray) -> np.ndarray:
    """``out[s, x] = min_{c in combos[s]} table[x, c]``."""
    return table[:, combos].min(axis=2).T


def restricted_growth_strings(n: int, k: int | None = None) -> Iterator[tuple[int, ...]]:
    """Set partitions of ``range(n)`` into at most ``k`` blocks.

    Each partition appears once, encoded as a restricted growth string
    ``a`` with ``a[0] = 0`` and ``a[i] <= 1 + max(a[:i])``.
    """
    if n == 0:
        yield ()
        return
    k = n if k is None else k
    a = [0] * n

    def rec(i, m):
        if i == n:
            yield tuple(a)
            return
        for b in range(min(m + 2, k)):
            a[i] = b
            yield from rec(i + 1, max(m, b))

    yield from rec(1, 0)


def partition_masks(n: int, k: int) -> Iterator[list[int]]:
    """Same partitions as :func:`restricted_growth_strings`, as block bitmasks."""
    masks: list[int] = []

    def rec(i):
        if i == n:
            yield masks
            return
        bit = 1 << i
        for b in range(len(masks)):
            masks[b] |= bit
            yield from rec(i + 1)
            masks[b] ^= bit
        if len(masks) < k:
            masks.append(bit)
            yield from rec(i + 1)
            masks.pop()

    if n == 0:
        yield []
        return
    yield from rec(0)


def check_budget(needed: int, budget: int | None = None) -> None:
    b = enumeration_budget(budget)
    if needed > b:
        raise BudgetError(needed, b)
