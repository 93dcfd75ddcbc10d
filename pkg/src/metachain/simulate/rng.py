"""Counter based random streams, one per ``(seed, index)`` pair, independent of scheduling."""

from __future__ import annotations

import numpy as np


def stream(seed, index):
    """Generator for trajectory (or sample block) ``index`` of a run seeded with ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=(int(index),))))


def derive_seed(seed, index):
    """A 64 bit child seed, used to hand each campaign instance its own seed."""
    return int(np.random.SeedSequence(int(seed), spawn_key=(int(index),)).generate_state(1, np.uint64)[0])


__all__ = [
    "derive_seed",
    "stream",
]
