"""
Domain layer - model rules.

The innermost layer: cohort entities, value objects, the MedFACT network
and domain exceptions. It depends only on src.shared.
"""

from src.domain.entities import Cohort, PatientRecord
from src.domain.enums import AblationMode, SplitMode
from src.domain.exceptions import (
    ContractError,
    MedfactException,
    MetricUndefinedError,
    NumericDivergenceError,
    PreprocessingError,
    ShapeError,
    SplitError,
    ValidationException,
)
from src.domain.value_objects import ClusterAssignment, CorrelationGraph, CorrelationMatrix

__all__ = [
    # Entities
    "Cohort",
    "PatientRecord",
    # Value Objects
    "ClusterAssignment",
    "CorrelationGraph",
    "CorrelationMatrix",
    # Enums
    "AblationMode",
    "SplitMode",
    # Exceptions
    "MedfactException",
    "ValidationException",
    "ContractError",
    "ShapeError",
    "PreprocessingError",
    "SplitError",
    "MetricUndefinedError",
    "NumericDivergenceError",
]
