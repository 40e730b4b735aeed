"""Counter-based random streams: replication ``r`` of seed ``s`` is ``derive(s, r)``.

Streams are Philox generators sharing a key derived from the seed and starting
at disjoint counter offsets (the top 64-bit counter word holds ``r``), so any
replication can be regenerated on its own in any process.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

SEED_BITS = 64


@lru_cache(maxsize=64)
def _key(seed: int) -> tuple[int, int]:
    state = np.random.SeedSequence(int(seed)).generate_state(2, np.uint64)
    return int(state[0]), int(state[1])


def derive(seed: int, replication: int) -> np.random.Generator:
    if seed < 0 or seed >= 1 << SEED_BITS:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if replication < 0 or replication >= 1 << 64:
        raise ValueError(f"replication index out of range: {replication}")
    key = np.array(_key(seed), dtype=np.uint64)
    counter = np.array([0, 0, 0, replication], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))
