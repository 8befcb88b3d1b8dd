"""
Imputation and normalization.

Missing dynamic values are forward-filled inside a patient, whatever is
still missing takes the training-split mean, and every feature is z-scored
with training-split statistics (std floored at 1e-6). Statistics come from
observed training values only.
"""

from collections.abc import Sequence
from dataclasses import replace

import numpy as np
import pandas as pd

from src.domain.entities.cohort import Cohort, NormalizationStats, PatientRecord
from src.domain.exceptions import PreprocessingError
from src.shared.telemetry.logging import get_logger

logger = get_logger(__name__)

STD_FLOOR = 1e-6


def forward_fill(dynamic: np.ndarray) -> np.ndarray:
    """Carry the last observation forward along the visit axis"""
    return pd.DataFrame(dynamic).ffill().to_numpy(dtype=np.float64)


def _column_stats(values: np.ndarray, names: Sequence[str]) -> tuple[tuple[float, ...], tuple[float, ...]]:
    if values.shape[1] == 0:
        return (), ()
    observed = ~np.isnan(values)
    for j, name in enumerate(names):
        if not observed[:, j].any():
            raise PreprocessingError(name, "no observed value in the training split")
    mean = np.nanmean(values, axis=0)
    std = np.maximum(np.nanstd(values, axis=0), STD_FLOOR)
    return tuple(float(v) for v in mean), tuple(float(v) for v in std)


def fit_stats(cohort: Cohort, train_indices: Sequence[int]) -> NormalizationStats:
    """
    Training-split statistics.

    Raises:
        PreprocessingError: If a feature is missing everywhere in the split
    """
    if len(train_indices) == 0:
        raise PreprocessingError("*", "the training split is empty")
    train = [cohort.records[i] for i in train_indices]
    dynamic = np.concatenate([r.dynamic for r in train], axis=0)
    static = np.stack([r.static for r in train], axis=0)
    dynamic_mean, dynamic_std = _column_stats(dynamic, cohort.dynamic_names)
    static_mean, static_std = _column_stats(static, cohort.static_names)
    return NormalizationStats(
        dynamic_mean=dynamic_mean,
        dynamic_std=dynamic_std,
        static_mean=static_mean,
        static_std=static_std,
    )


def impute_record(record: PatientRecord, stats: NormalizationStats) -> PatientRecord:
    """Forward fill, then mean fill; no z-scoring"""
    dynamic = forward_fill(record.dynamic)
    dynamic_mean = np.array(stats.dynamic_mean)
    dynamic = np.where(np.isnan(dynamic), dynamic_mean[None, :], dynamic)
    static = np.where(np.isnan(record.static), np.array(stats.static_mean), record.static)
    return replace(record, dynamic=dynamic, static=static)


def normalize_record(record: PatientRecord, stats: NormalizationStats) -> PatientRecord:
    filled = impute_record(record, stats)
    dynamic = (filled.dynamic - np.array(stats.dynamic_mean)) / np.array(stats.dynamic_std)
    static = (filled.static - np.array(stats.static_mean)) / np.array(stats.static_std)
    return replace(filled, dynamic=dynamic, static=static)


def apply_stats(cohort: Cohort, stats: NormalizationStats) -> Cohort:
    """Preprocess every record with given statistics (e.g. a checkpoint's)"""
    if len(stats.dynamic_mean) != cohort.n_dynamic or len(stats.static_mean) != cohort.n_static:
        raise PreprocessingError("*", "statistics do not match the cohort's feature layout")
    records = tuple(normalize_record(r, stats) for r in cohort.records)
    return replace(cohort, records=records, normalization_stats=stats)


def preprocess(cohort: Cohort, train_indices: Sequence[int]) -> Cohort:
    """Fit statistics on the training split and apply them to every record"""
    stats = fit_stats(cohort, train_indices)
    logger.info("Preprocessed %d records with statistics from %d training records", len(cohort), len(train_indices))
    return apply_stats(cohort, stats)
