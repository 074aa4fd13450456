"""Counter-style per-sample RNG streams.

Each Monte Carlo sample draws from a generator keyed by (seed, index), so
estimates are reproducible and independent of how samples are distributed
across workers.
"""

from __future__ import annotations

import numpy as np


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for sample `index` of the stream identified by `seed`."""
    return np.random.default_rng(np.random.SeedSequence(entropy=(int(seed), int(index))))


def derived_seed(seed: int, *tags: int) -> int:
    """Stable derived integer seed for nested constructions."""
    ss = np.random.SeedSequence(entropy=(int(seed),) + tuple(int(t) for t in tags))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
