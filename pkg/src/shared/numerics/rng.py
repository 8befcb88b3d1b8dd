"""
Seeded random-number source.

Draws come from numpy's Philox4x64-10 counter-based bit generator
(10 rounds, multipliers 0xD2E7470EE14C6C93 and 0xCA5A826395121157,
Weyl increments 0x9E3779B97F4A7C15 and 0xBB67AE8584CAA73B). Counter-based
generation makes the sequence a pure function of (key, counter), so the
same seed reproduces the same draws on every platform. Independent streams
(one per patient, per epoch, per restart) are derived through a
SeedSequence spawn key, which keeps them reproducible regardless of the
order in which work items are scheduled.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class SeededRng:
    """A Philox generator bound to a seed and an optional stream key"""

    seed: int
    stream: tuple[int, ...] = ()
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.seed < 0:
            raise ValueError("Seed must be a non-negative integer")
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.stream)
        self.generator = np.random.Generator(np.random.Philox(sequence))

    def child(self, *keys: int) -> "SeededRng":
        """Derive an independent stream; identical keys give identical streams"""
        return SeededRng(self.seed, self.stream + tuple(keys))

    def uniform(self, low: float, high: float, size: int | tuple[int, ...]) -> np.ndarray:
        return self.generator.uniform(low, high, size)

    def normal(self, loc: float, scale: float, size: int | tuple[int, ...]) -> np.ndarray:
        return self.generator.normal(loc, scale, size)

    def integers(self, low: int, high: int) -> int:
        return int(self.generator.integers(low, high))

    def permutation(self, n: int) -> np.ndarray:
        return self.generator.permutation(n)

    def choice(self, n: int, size: int, *, replace: bool, p: np.ndarray | None = None) -> np.ndarray:
        return self.generator.choice(n, size=size, replace=replace, p=p)
