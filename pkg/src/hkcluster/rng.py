"""Deterministic substream derivation for seeded experiments.

Every randomized routine takes an integer seed and derives independent
generators through SeedSequence spawn keys, so results never depend on
execution order or worker count.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def substream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the substream identified by (seed, key)."""
    ss = np.random.SeedSequence(entropy=int(seed) & _MASK64, spawn_key=tuple(key))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed: int, *key: int) -> int:
    """A 64-bit seed for the substream identified by (seed, key)."""
    ss = np.random.SeedSequence(entropy=int(seed) & _MASK64, spawn_key=tuple(key))
    return int(ss.generate_state(1, np.uint64)[0])
