"""Deterministic RNG streams keyed by (master seed, purpose, indices)."""

from __future__ import annotations

import numpy as np

STREAM_INSTANCE = 1
STREAM_APPROX = 2
STREAM_RUN = 3
STREAM_LANDSCAPE = 4


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for ``keys`` under ``seed``; same inputs give the same stream."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=tuple(keys))))
