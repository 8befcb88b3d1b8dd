from src.application.use_cases.training.optimizer import AdamState, adam_step
from src.application.use_cases.training.trainer import EpochRecord, TrainedModel, train

__all__ = ["AdamState", "EpochRecord", "TrainedModel", "adam_step", "train"]
