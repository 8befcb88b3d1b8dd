from src.application.use_cases.evaluation.evaluate import EvaluationResult, evaluate_model
from src.application.use_cases.evaluation.kfold import FoldResult, KFoldReport, kfold_evaluate

__all__ = ["EvaluationResult", "FoldResult", "KFoldReport", "evaluate_model", "kfold_evaluate"]
