"""Seedable random source consumed by every sampler in the package.

All samplers take a ``numpy.random.Generator``; independent streams are the
caller's responsibility when sampling concurrently.
"""

from __future__ import annotations

import numpy as np

RandomSource = np.random.Generator

# Documented default so published command outputs are reproducible.
DEFAULT_SEED = 20210520


def random_source(seed: int | None = DEFAULT_SEED) -> RandomSource:
    """Return a fresh generator seeded with ``seed``."""
    return np.random.default_rng(seed)
