"""Seeded, counter-based random streams.

Trial ``i`` of an experiment seeded with ``seed`` always draws from the
Philox stream keyed by ``(seed, i)``, so results do not depend on how trials
are scheduled across workers.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1


def stream(seed: int, index: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence([int(seed) & MASK64, int(index) & MASK64])
    return np.random.Generator(np.random.Philox(ss))


def sample_without_replacement(rng: np.random.Generator, population: int, k: int) -> list[int]:
    """Uniform ``k``-subset of ``range(population)`` via partial Fisher-Yates."""
    if not 0 <= k <= population:
        raise ValueError(f"cannot draw {k} items from {population}")
    pool = list(range(population))
    for i in range(k):
        j = i + int(rng.integers(population - i))
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:k]
