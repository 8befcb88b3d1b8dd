"""
Stratified cohort splits.

Each label class is shuffled with the seed, then the classes are merged by
fractional rank within their class. Any contiguous run of the merged order
therefore holds both classes in close to cohort proportion.

- holdout: the last n//10 go to test, the n//10 before them to validation,
  the rest to training (8:1:1)
- kfold: the merged order is dealt round-robin, so fold sizes differ by at
  most one and the leading folds take the remainder
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from src.domain.enums import SplitMode
from src.domain.exceptions import SplitError
from src.shared.numerics.rng import SeededRng

HOLDOUT_MIN_RECORDS = 10


@dataclass(frozen=True)
class HoldoutSplit:
    train: tuple[int, ...]
    validation: tuple[int, ...]
    test: tuple[int, ...]


@dataclass(frozen=True)
class KFoldSplit:
    folds: tuple[tuple[int, ...], ...]

    def training_pool(self, fold: int) -> tuple[int, ...]:
        """Indices of every fold but `fold`, ascending"""
        return tuple(sorted(i for f, members in enumerate(self.folds) if f != fold for i in members))


def stratified_order(labels: Sequence[int], indices: Sequence[int], seed: int) -> list[int]:
    """`indices` reordered so that every prefix is close to label-balanced"""
    labels = np.asarray(labels)
    rng = SeededRng(seed)
    keyed: list[tuple[float, int, int]] = []
    for cls in (0, 1):
        members = np.array([i for i in indices if labels[i] == cls], dtype=np.int64)
        shuffled = members[rng.child(cls).permutation(members.size)]
        keyed.extend(((rank + 0.5) / shuffled.size, cls, int(i)) for rank, i in enumerate(shuffled))
    keyed.sort()
    return [i for _, _, i in keyed]


def holdout_split(labels: Sequence[int], seed: int) -> HoldoutSplit:
    n = len(labels)
    if n < HOLDOUT_MIN_RECORDS:
        raise SplitError(f"A holdout split needs at least {HOLDOUT_MIN_RECORDS} records, got {n}", n, 3)
    order = stratified_order(labels, range(n), seed)
    n_held = n // 10
    n_train = n - 2 * n_held
    return HoldoutSplit(
        train=tuple(sorted(order[:n_train])),
        validation=tuple(sorted(order[n_train : n_train + n_held])),
        test=tuple(sorted(order[n_train + n_held :])),
    )


def kfold_split(labels: Sequence[int], k: int, seed: int) -> KFoldSplit:
    n = len(labels)
    if k < 2 or n < k:
        raise SplitError(f"Cannot split {n} records into {k} folds", n, k)
    order = stratified_order(labels, range(n), seed)
    return KFoldSplit(folds=tuple(tuple(sorted(order[f::k])) for f in range(k)))


def split(labels: Sequence[int], mode: SplitMode, seed: int, k: int = 5) -> HoldoutSplit | KFoldSplit:
    if mode == SplitMode.HOLDOUT:
        return holdout_split(labels, seed)
    return kfold_split(labels, k, seed)


def carve_validation(labels: Sequence[int], pool: Sequence[int], seed: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split a training pool into (train, validation) with a stratified tenth held out"""
    if len(pool) < 2:
        raise SplitError("A training pool needs at least 2 records to hold out validation", len(pool), 2)
    order = stratified_order(labels, pool, seed)
    n_val = max(1, len(pool) // 10)
    return tuple(sorted(order[:-n_val])), tuple(sorted(order[-n_val:]))


def stratified_subsample(labels: Sequence[int], indices: Sequence[int], fraction: float, seed: int) -> tuple[int, ...]:
    """A stratified `fraction` of `indices` (at least one record)"""
    if fraction >= 1.0:
        return tuple(indices)
    keep = max(1, math.ceil(fraction * len(indices)))
    return tuple(sorted(stratified_order(labels, indices, seed)[:keep]))
