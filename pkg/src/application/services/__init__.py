"""
Application services.

HashService is a class because it holds a swappable digest algorithm. The
numeric services (metrics, preprocessing, splits, synthetic cohorts) keep no
state between calls, so they are plain functions over cohorts and arrays.
"""

from src.application.services.hash_service import HashService, SHA256Algorithm
from src.application.services.metrics_service import (
    BootstrapResult,
    MetricReport,
    ScoredSet,
    auprc,
    auroc,
    bootstrap,
    evaluate_scores,
    min_p_se,
)
from src.application.services.preprocessing_service import apply_stats, fit_stats, preprocess
from src.application.services.split_service import HoldoutSplit, KFoldSplit, holdout_split, kfold_split, split
from src.application.services.synthetic_service import generate_synthetic

__all__ = [
    "HashService",
    "SHA256Algorithm",
    "BootstrapResult",
    "MetricReport",
    "ScoredSet",
    "auprc",
    "auroc",
    "bootstrap",
    "evaluate_scores",
    "min_p_se",
    "apply_stats",
    "fit_stats",
    "preprocess",
    "HoldoutSplit",
    "KFoldSplit",
    "holdout_split",
    "kfold_split",
    "split",
    "generate_synthetic",
]
