"""Score a trained model on a cohort."""

from dataclasses import dataclass

import numpy as np

from src.application.services.metrics_service import MetricReport, evaluate_scores
from src.application.services.preprocessing_service import apply_stats
from src.application.use_cases.training.trainer import TrainedModel
from src.domain.entities.cohort import Cohort
from src.domain.exceptions import ContractError
from src.shared.telemetry.logging import get_logger
from src.shared.telemetry.tracing import traced

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class EvaluationResult:
    report: MetricReport
    scores: np.ndarray
    labels: np.ndarray
    attention: np.ndarray  # N x (F + 1)


def check_layout(model: TrainedModel, cohort: Cohort) -> None:
    """
    Raises:
        ContractError: If the cohort's features differ from the model's
    """
    if cohort.n_dynamic != model.n_dynamic or cohort.n_static != len(model.static_names):
        raise ContractError(
            "evaluate",
            f"cohort has F={cohort.n_dynamic}, S={cohort.n_static}; "
            f"checkpoint has F={model.n_dynamic}, S={len(model.static_names)}",
        )


@traced("medfact.evaluate")
def evaluate_model(model: TrainedModel, cohort: Cohort, *, resamples: int = 0, seed: int = 0) -> EvaluationResult:
    """
    Preprocess with the model's training statistics, predict and score.

    Args:
        model: Trained model (usually loaded from a checkpoint)
        cohort: Raw records, missing values allowed
        resamples: Bootstrap resamples; 0 skips the stds
        seed: Bootstrap seed
    """
    check_layout(model, cohort)
    if model.normalization_stats is not None:
        cohort = apply_stats(cohort, model.normalization_stats)
    scores, attention = model.predict(cohort.records)
    labels = cohort.labels
    report = evaluate_scores(scores, labels, resamples=resamples, seed=seed)
    logger.info(
        "Evaluated %d records: AUROC=%.4f AUPRC=%.4f Min(P+,Se)=%.4f",
        len(cohort),
        report.auroc,
        report.auprc,
        report.min_p_se,
    )
    return EvaluationResult(report=report, scores=scores, labels=labels, attention=attention)
