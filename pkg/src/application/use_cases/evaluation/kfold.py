"""
k-fold cross-validation.

Each fold trains on the other k - 1 folds (a stratified tenth of them held
out for validation), preprocessing statistics are fitted on that training
part only, and the held-out fold is scored. The aggregate is the mean and
sample std of the per-fold metrics.
"""

from dataclasses import dataclass
from typing import Any

import numpy as np

from src.application.dtos.config import TrainConfig
from src.application.services.metrics_service import MetricReport, evaluate_scores
from src.application.services.preprocessing_service import preprocess
from src.application.services.split_service import carve_validation, kfold_split
from src.application.use_cases.training.trainer import train
from src.domain.entities.cohort import Cohort
from src.domain.exceptions import SplitError
from src.shared.enums import MetricName
from src.shared.telemetry.logging import get_logger
from src.shared.telemetry.tracing import add_span_event, traced

logger = get_logger(__name__)


@dataclass(frozen=True)
class FoldResult:
    fold: int
    test_indices: tuple[int, ...]
    report: MetricReport


@dataclass(frozen=True)
class KFoldReport:
    folds: tuple[FoldResult, ...]

    def mean(self, metric: MetricName) -> float:
        return float(np.mean([f.report.value(metric) for f in self.folds]))

    def std(self, metric: MetricName) -> float:
        values = [f.report.value(metric) for f in self.folds]
        return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "folds": [
                {"fold": f.fold, "size": len(f.test_indices), **f.report.to_dict()}
                for f in self.folds
            ],
            "aggregate": [
                {"name": metric.value, "mean": self.mean(metric), "std": self.std(metric)}
                for metric in MetricName
            ],
        }


@traced("medfact.kfold")
def kfold_evaluate(cohort: Cohort, config: TrainConfig, *, k: int = 5, resamples: int = 0) -> KFoldReport:
    """
    Train and score one model per fold.

    Raises:
        SplitError: If the cohort has fewer than k records, or a test fold
            would hold a single label class
    """
    labels = cohort.labels
    folds = kfold_split(labels, k, config.seed)
    for fold, test_indices in enumerate(folds.folds):
        if np.unique(labels[list(test_indices)]).size < 2:
            raise SplitError(
                f"Test fold {fold} holds a single label class; each of the {k} folds needs positives and negatives",
                len(labels),
                k,
            )
    results = []
    for fold, test_indices in enumerate(folds.folds):
        train_indices, validation_indices = carve_validation(labels, folds.training_pool(fold), config.seed + fold)
        prepared = preprocess(cohort, train_indices)
        model = train(prepared, train_indices, validation_indices, config)
        scores, _ = model.predict([prepared.records[i] for i in test_indices])
        report = evaluate_scores(scores, labels[list(test_indices)], resamples=resamples, seed=config.seed + fold)
        results.append(FoldResult(fold=fold, test_indices=test_indices, report=report))
        logger.info("Fold %d/%d: AUROC=%.4f AUPRC=%.4f", fold + 1, k, report.auroc, report.auprc)
        add_span_event("fold_completed", {"fold": fold, "auprc": report.auprc})
    return KFoldReport(folds=tuple(results))
