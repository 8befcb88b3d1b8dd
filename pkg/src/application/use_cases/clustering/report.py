"""Cluster report: K, named groups, R and optional agreement with a planted partition."""

from typing import Any

from sklearn.metrics import adjusted_rand_score

from src.application.use_cases.training.trainer import TrainedModel
from src.domain.value_objects.core import ClusterAssignment


def adjusted_rand_index(recovered: ClusterAssignment, planted: ClusterAssignment) -> float:
    return float(adjusted_rand_score(planted.labels(), recovered.labels()))


def cluster_report(model: TrainedModel, planted: ClusterAssignment | None = None) -> dict[str, Any]:
    report: dict[str, Any] = {
        "k": model.assignment.k,
        "ablation": model.config.ablation.value,
        "groups": model.assignment.named_groups(model.dynamic_names),
        "correlations": {
            "features": list(model.dynamic_names),
            "matrix": model.correlations.values.tolist(),
        },
    }
    if planted is not None:
        report["planted_ari"] = adjusted_rand_index(model.assignment, planted)
    return report
