"""Seeded random streams.

Every random draw in a run comes from a stream keyed by (purpose, iteration,
member) and derived from the run seed with ``numpy.random.SeedSequence``.
Draws therefore never depend on evaluation order or on the number of worker
threads, and adding a consumer never shifts the draws of another one.
"""

from __future__ import annotations

import numpy as np

__all__ = ("Purpose", "RandomStreams")


class Purpose:
    """Spawn-key prefixes that separate independent consumers of one seed."""

    INIT = 0
    PERTURB = 1
    TRUTH = 2
    NOISE = 3
    SENSING = 4
    DIAGNOSTIC = 5


class RandomStreams:
    """
    Factory of independent generators derived from one 64-bit seed.

    Usage:
        streams = RandomStreams(seed)
        rng = streams.stream(Purpose.PERTURB, iteration, member)
    """

    def __init__(self, seed: int):
        if not 0 <= int(seed) < 2**64:
            raise ValueError(f"seed must fit in an unsigned 64-bit integer, got {seed}")
        self.seed = int(seed)

    def stream(self, purpose: int, *key: int) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.seed, spawn_key=(int(purpose), *(int(k) for k in key)))
        return np.random.default_rng(sequence)

    def __repr__(self):
        return f"{self.__class__.__name__}(seed={self.seed})"
