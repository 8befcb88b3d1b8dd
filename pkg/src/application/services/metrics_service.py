"""
Binary-classification metrics.

- AUROC: Mann-Whitney form, (concordant + 0.5 tied) / (P N)
- AUPRC: average precision, sum_n (R_n - R_{n-1}) P_n over descending
  unique score thresholds, no interpolation
- Min(P+, Se): max over unique-score thresholds (predict positive when
  score >= cut) of min(precision, sensitivity)
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt

from src.domain.exceptions import ContractError, MetricUndefinedError
from src.shared.enums import MetricName
from src.shared.numerics.rng import SeededRng
from src.shared.telemetry.logging import get_logger

logger = get_logger(__name__)

DEFAULT_RESAMPLES = 1000


@dataclass(frozen=True, eq=False)
class ScoredSet:
    """Scores with binary labels of equal length"""

    scores: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        scores = np.asarray(self.scores, dtype=np.float64).reshape(-1)
        labels = np.asarray(self.labels).reshape(-1)
        if scores.shape != labels.shape:
            raise ContractError("ScoredSet", "scores and labels differ in length")
        if not np.all((labels == 0) | (labels == 1)):
            raise ContractError("ScoredSet", "labels must be 0 or 1")
        if not np.all(np.isfinite(scores)):
            raise ContractError("ScoredSet", "scores must be finite")
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "labels", labels.astype(np.int64))

    @property
    def positives(self) -> int:
        return int(self.labels.sum())

    @property
    def negatives(self) -> int:
        return int(self.labels.size - self.labels.sum())

    def subset(self, indices: npt.ArrayLike) -> "ScoredSet":
        return ScoredSet(self.scores[indices], self.labels[indices])


def _threshold_counts(scored: ScoredSet) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative (TP, FP) at each unique score, highest threshold first"""
    thresholds, inverse = np.unique(-scored.scores, return_inverse=True)
    tp = np.cumsum(np.bincount(inverse, weights=scored.labels, minlength=thresholds.size))
    total = np.cumsum(np.bincount(inverse, minlength=thresholds.size))
    return tp, total - tp


def auroc(scored: ScoredSet) -> float:
    """
    Raises:
        MetricUndefinedError: Without at least one positive and one negative
    """
    p, n = scored.positives, scored.negatives
    if p == 0 or n == 0:
        raise MetricUndefinedError(MetricName.AUROC.value, p, n)
    _, inverse, counts = np.unique(scored.scores, return_inverse=True, return_counts=True)
    upper = np.cumsum(counts)
    mid_ranks = upper - (counts - 1) / 2.0
    positive_rank_sum = mid_ranks[inverse][scored.labels == 1].sum()
    return float((positive_rank_sum - p * (p + 1) / 2.0) / (p * n))


def auprc(scored: ScoredSet) -> float:
    """
    Raises:
        MetricUndefinedError: Without a positive
    """
    p = scored.positives
    if p == 0:
        raise MetricUndefinedError(MetricName.AUPRC.value, p, scored.negatives)
    tp, fp = _threshold_counts(scored)
    precision = tp / (tp + fp)
    recall = tp / p
    recall_steps = np.diff(recall, prepend=0.0)
    return float(np.sum(recall_steps * precision))


def min_p_se(scored: ScoredSet) -> float:
    """
    Raises:
        MetricUndefinedError: Without a positive
    """
    p = scored.positives
    if p == 0:
        raise MetricUndefinedError(MetricName.MIN_P_SE.value, p, scored.negatives)
    tp, fp = _threshold_counts(scored)
    return float(np.max(np.minimum(tp / (tp + fp), tp / p)))


METRICS: dict[MetricName, Callable[[ScoredSet], float]] = {
    MetricName.AUROC: auroc,
    MetricName.AUPRC: auprc,
    MetricName.MIN_P_SE: min_p_se,
}


@dataclass(frozen=True)
class BootstrapResult:
    value: float
    std: float
    resamples: int
    skipped: int


def bootstrap(
    scored: ScoredSet,
    metric: Callable[[ScoredSet], float],
    resamples: int = DEFAULT_RESAMPLES,
    seed: int = 0,
) -> BootstrapResult:
    """
    Point estimate on the full set plus the sample std over resamples.

    Resamples are drawn with replacement at full size; single-class
    resamples are skipped and counted.
    """
    value = metric(scored)
    rng = SeededRng(seed)
    n = scored.labels.size
    values: list[float] = []
    skipped = 0
    for _ in range(resamples):
        resample = scored.subset(rng.choice(n, n, replace=True))
        try:
            values.append(metric(resample))
        except MetricUndefinedError:
            skipped += 1
    std = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
    if skipped:
        logger.debug("Bootstrap skipped %d of %d single-class resamples", skipped, resamples)
    return BootstrapResult(value=value, std=std, resamples=len(values), skipped=skipped)


@dataclass(frozen=True)
class MetricReport:
    """
    AUROC, AUPRC and Min(P+, Se) with optional bootstrap stds.

    `resamples` is the number drawn; `skipped` counts, per metric, the
    resamples on which that metric was undefined.
    """

    auroc: float
    auprc: float
    min_p_se: float
    std: dict[str, float] = field(default_factory=dict)
    resamples: int = 0
    skipped: dict[str, int] = field(default_factory=dict)

    def value(self, metric: MetricName) -> float:
        return float(getattr(self, metric.value))

    def to_dict(self) -> dict[str, Any]:
        return {
            "metrics": [
                {
                    "name": name.value,
                    "value": self.value(name),
                    "std": self.std.get(name.value),
                    "resamples": self.resamples - self.skipped.get(name.value, 0),
                    "skipped": self.skipped.get(name.value, 0),
                }
                for name in MetricName
            ]
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MetricReport":
        by_name = {m["name"]: m for m in data["metrics"]}
        return cls(
            auroc=by_name["auroc"]["value"],
            auprc=by_name["auprc"]["value"],
            min_p_se=by_name["min_p_se"]["value"],
            std={k: m["std"] for k, m in by_name.items() if m.get("std") is not None},
            resamples=by_name["auroc"]["resamples"] + by_name["auroc"]["skipped"],
            skipped={k: m["skipped"] for k, m in by_name.items() if m["skipped"]},
        )


def evaluate_scores(
    scores: Sequence[float] | np.ndarray,
    labels: Sequence[int] | np.ndarray,
    *,
    resamples: int = 0,
    seed: int = 0,
) -> MetricReport:
    """All three metrics; bootstrap stds when resamples > 0"""
    scored = ScoredSet(np.asarray(scores), np.asarray(labels))
    if resamples <= 0:
        return MetricReport(auroc=auroc(scored), auprc=auprc(scored), min_p_se=min_p_se(scored))

    results = {
        name: bootstrap(scored, fn, resamples, seed=seed)
        for name, fn in METRICS.items()
    }
    return MetricReport(
        auroc=results[MetricName.AUROC].value,
        auprc=results[MetricName.AUPRC].value,
        min_p_se=results[MetricName.MIN_P_SE].value,
        std={name.value: r.std for name, r in results.items()},
        resamples=resamples,
        skipped={name.value: r.skipped for name, r in results.items() if r.skipped},
    )
