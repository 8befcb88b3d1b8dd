"""Application use cases."""

from src.application.use_cases.clustering import cluster_report, sweep_k
from src.application.use_cases.evaluation import evaluate_model, kfold_evaluate
from src.application.use_cases.training import train

__all__ = [
    "cluster_report",
    "evaluate_model",
    "kfold_evaluate",
    "sweep_k",
    "train",
]
