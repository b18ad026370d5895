"""Seed handling. All randomness goes through numpy's PCG64 bit generator."""
from __future__ import annotations

import numpy as np

GENERATOR = "numpy.PCG64"


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def derive_seeds(seed: int, k: int) -> list[int]:
    """``k`` independent 64-bit child seeds of ``seed`` via SeedSequence."""
    state = np.random.SeedSequence(int(seed)).generate_state(k, dtype=np.uint64)
    return [int(s) for s in state]
