"""Seed handling for reproducible, parallel-safe random growth.

All randomness flows through numpy's Philox 4x64 counter-based generator.
A run is identified by a single 64-bit master seed; replication ``r`` uses
the independent child seed ``derive_seed(master, r)``, obtained from
``numpy.random.SeedSequence(master, spawn_key=(r,))``.  Child streams are
therefore fixed by ``(master, r)`` alone, so results never depend on how
replications are distributed over worker processes.
"""

from __future__ import annotations

import numpy as np

MAX_SEED = 2**64 - 1


def check_seed(seed: int) -> int:
    """Validate and return a 64-bit master seed."""
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def derive_seed(master: int, replication: int) -> int:
    """64-bit child seed for one replication of an experiment."""
    ss = np.random.SeedSequence(check_seed(master), spawn_key=(int(replication),))
    return int(ss.generate_state(1, np.uint64)[0])


def generator(seed: int) -> np.random.Generator:
    """Philox generator for the given 64-bit seed."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(check_seed(seed))))
