"""Root-seed splitting.

A run has one unsigned 64-bit root seed. Check ``i`` (and any nested index)
draws from ``SeedSequence(entropy=root, spawn_key=(i, ...))``, so each
substream depends only on its key and not on the order checks run in.
"""

from __future__ import annotations

import os

import numpy as np

MAX_SEED = 2**64 - 1
THREADS_ENV = "MONOGAMY_THREADS"


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return seed


def substream(root: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=check_seed(root), spawn_key=tuple(key)))


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
