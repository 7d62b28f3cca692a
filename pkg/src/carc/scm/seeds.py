"""Counter-based seed derivation.

Every task instance owns one 64-bit seed. Child seeds are derived from
``(seed, stream, index)`` through numpy's SeedSequence spawn keys, so any
demonstration pair, counterfactual batch or replicate can be regenerated
without replaying the ones before it.
"""

import hashlib
from enum import IntEnum

import numpy as np


class SeedStream(IntEnum):
    """Independent child streams of a task seed."""

    TRAIN = 0
    TEST = 1
    INTERVENTION = 2
    HELD_OUT = 3
    REPLICATE = 4
    PROMPT = 5
    REGISTRY = 6


def derive_seed(seed: int, stream: SeedStream, index: int) -> int:
    """Derive the ``index``-th child seed of ``seed`` on ``stream``."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(int(stream), index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def stable_seed(text: str) -> int:
    """Map a string (e.g. a task id) to a 64-bit seed, stable across processes."""
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
