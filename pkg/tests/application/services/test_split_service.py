import numpy as np
import pytest

from src.application.services.split_service import (
    carve_validation,
    holdout_split,
    kfold_split,
    split,
    stratified_subsample,
)
from src.domain.enums import SplitMode
from src.domain.exceptions import SplitError


def _labels(n: int, positives: int, seed: int = 0) -> np.ndarray:
    labels = np.zeros(n, dtype=int)
    labels[np.random.default_rng(seed).choice(n, positives, replace=False)] = 1
    return labels


class TestHoldoutSplit:
    """Unit tests for the stratified 8:1:1 split."""

    def test_hundred_records_give_80_10_10(self):
        holdout = holdout_split(_labels(100, 30), seed=0)
        assert (len(holdout.train), len(holdout.validation), len(holdout.test)) == (80, 10, 10)

    def test_parts_are_disjoint_and_exhaustive(self):
        holdout = holdout_split(_labels(137, 40), seed=3)
        parts = [set(holdout.train), set(holdout.validation), set(holdout.test)]
        assert set().union(*parts) == set(range(137))
        assert sum(len(p) for p in parts) == 137

    def test_positive_rates_follow_the_cohort(self):
        """
        GIVEN 1000 records with a 25% positive rate
        WHEN split 8:1:1
        THEN every part's positive rate is within 2 percentage points.
        """
        labels = _labels(1000, 250)
        holdout = holdout_split(labels, seed=1)
        for part in (holdout.train, holdout.validation, holdout.test):
            assert abs(labels[list(part)].mean() - 0.25) <= 0.02

    def test_same_seed_same_split(self):
        labels = _labels(50, 10)
        assert holdout_split(labels, 4) == holdout_split(labels, 4)

    def test_too_few_records(self):
        with pytest.raises(SplitError):
            holdout_split([0, 1, 0], seed=0)


class TestKFoldSplit:
    def test_fold_sizes_spread_the_remainder(self):
        folds = kfold_split(_labels(662, 200), k=5, seed=0)
        assert [len(f) for f in folds.folds] == [133, 133, 132, 132, 132]

    def test_folds_partition_the_cohort(self):
        folds = kfold_split(_labels(101, 33), k=4, seed=2)
        members = [i for fold in folds.folds for i in fold]
        assert sorted(members) == list(range(101))

    def test_training_pool_excludes_its_fold(self):
        folds = kfold_split(_labels(20, 6), k=5, seed=0)
        pool = folds.training_pool(2)
        assert not set(pool) & set(folds.folds[2])
        assert len(pool) == 16

    def test_stratified_folds(self):
        labels = _labels(500, 100)
        for fold in kfold_split(labels, 5, seed=7).folds:
            assert abs(labels[list(fold)].mean() - 0.2) <= 0.02

    def test_cohort_smaller_than_k(self):
        with pytest.raises(SplitError):
            kfold_split([0, 1, 0], k=5, seed=0)

    def test_dispatch_by_mode(self):
        labels = _labels(30, 10)
        assert split(labels, SplitMode.KFOLD, seed=0, k=3) == kfold_split(labels, 3, 0)
        assert split(labels, SplitMode.HOLDOUT, seed=0) == holdout_split(labels, 0)


class TestPoolHelpers:
    def test_carve_validation_holds_out_a_tenth(self):
        labels = _labels(100, 20)
        train, validation = carve_validation(labels, list(range(50)), seed=0)
        assert len(validation) == 5 and len(train) == 45
        assert set(train) | set(validation) == set(range(50))

    def test_subsample_fraction(self):
        labels = _labels(100, 50)
        subset = stratified_subsample(labels, list(range(100)), 0.1, seed=0)
        assert len(subset) == 10
        assert labels[list(subset)].sum() == 5

    def test_full_fraction_keeps_everything(self):
        assert stratified_subsample([0, 1, 0], [0, 1, 2], 1.0, seed=0) == (0, 1, 2)
