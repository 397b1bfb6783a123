"""Seeded random number generator for reproducible experiments."""

from __future__ import annotations

import random
from typing import Sequence, TypeVar

T = TypeVar("T")


class SeededRNG:
    """Wrapper around random.Random with named, derivable child streams."""

    def __init__(self, seed: int | str):
        self._seed = seed
        self._rng = random.Random(str(seed))

    @property
    def seed(self) -> int | str:
        return self._seed

    def randrange(self, stop: int) -> int:
        return self._rng.randrange(stop)

    def randint(self, a: int, b: int) -> int:
        return self._rng.randint(a, b)

    def sample(self, seq: Sequence[T], k: int) -> list[T]:
        return self._rng.sample(list(seq), k)

    def vector(self, q: int, length: int) -> tuple[int, ...]:
        return tuple(self._rng.randrange(q) for _ in range(length))

    def derive(self, *keys: object) -> SeededRNG:
        """Independent child stream keyed by (seed, keys), independent of draw history."""
        return SeededRNG("/".join([str(self._seed), *map(str, keys)]))
