"""Seeded random streams.

Every random draw in the package comes from a Philox counter-based
generator.  ``stream(seed, i)`` is the ``i``-th stream for a seed; streams
are separated by Philox jumps of 2**128 draws, so stream ``i`` never
overlaps stream ``j`` and parallel workers can each own one.
"""

import numpy as np


def stream(seed: int, index: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)).jumped(int(index)))


def child_seed(seed: int, *path: int) -> int:
    """Derive an independent integer seed from ``seed`` and a path of labels."""
    ss = np.random.SeedSequence([int(seed), *[int(p) for p in path]])
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))
