"""Seeded random number generation.

All randomness goes through numpy's Philox counter-based bit generator so that
a seed gives the same stream on every platform and numpy version that keeps the
Philox4x64 definition. Seeds for independent streams are derived with
numpy.random.SeedSequence spawn keys.
"""

from __future__ import annotations

import numpy as np

SEED_MASK = 0xFFFF_FFFF_FFFF_FFFF


def make_rng(seed: int) -> np.random.Generator:
    """Philox-backed generator for a 64-bit seed.

    Returns:
        Seeded numpy generator
    """
    return np.random.Generator(np.random.Philox(int(seed) & SEED_MASK))


def derive_seed(master_seed: int, *path: int) -> int:
    """Derive a 64-bit seed for the stream identified by path.

    Args:
        master_seed: Seed of the whole run
        *path: Stream coordinates, e.g. (cell, replication, stream)

    Returns:
        Seed usable with make_rng
    """
    sequence = np.random.SeedSequence(entropy=int(master_seed) & SEED_MASK, spawn_key=tuple(path))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])
