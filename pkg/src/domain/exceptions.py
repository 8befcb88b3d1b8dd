"""
Domain exceptions for the MedFACT pipeline.

This module defines domain-level exceptions that represent violated
contracts of the numerical model, the data pipeline and the metrics.
These exceptions are independent of infrastructure concerns.
"""

from typing import Any


class MedfactException(Exception):
    """
    Base exception for all MedFACT errors.

    All custom exceptions should inherit from this class to allow
    for consistent error handling and exit-code mapping in the CLI.

    Attributes:
        message: Human-readable error description
        error_code: Machine-readable error code
        details: Additional error context
    """

    def __init__(
        self,
        message: str,
        error_code: str | None = None,
        details: dict[str, Any] | None = None,
    ):
        self.message = message
        self.error_code = error_code or self.__class__.__name__
        self.details = details or {}
        super().__init__(self.message)

    def to_dict(self) -> dict[str, Any]:
        """Convert exception to dictionary for structured error output."""
        return {
            "error": self.error_code,
            "message": self.message,
            "details": self.details,
        }


class ValidationException(MedfactException):
    """Raised when input validation fails."""

    def __init__(self, message: str, field: str | None = None):
        details = {"field": field} if field else {}
        super().__init__(message, "VALIDATION_ERROR", details)


class ConfigValidationError(MedfactException):
    """Raised when a configuration model rejects its merged inputs."""

    def __init__(self, model: str, errors: list[Any]):
        super().__init__(
            f"Invalid {model} configuration",
            "CONFIG_VALIDATION_ERROR",
            {"model": model, "errors": errors},
        )


class ContractError(MedfactException):
    """Raised when an operation is called outside its precondition."""

    def __init__(self, operation: str, reason: str, **details: Any):
        super().__init__(
            f"{operation}: {reason}",
            "CONTRACT_ERROR",
            {"operation": operation, "reason": reason, **details},
        )


class ShapeError(MedfactException):
    """Raised when operand shapes do not conform."""

    def __init__(self, operation: str, left: tuple[int, ...], right: tuple[int, ...]):
        super().__init__(
            f"{operation}: incompatible shapes {left} and {right}",
            "SHAPE_ERROR",
            {"operation": operation, "left": list(left), "right": list(right)},
        )


class PreprocessingError(MedfactException):
    """Raised when a feature cannot be imputed or normalized."""

    def __init__(self, feature: str, reason: str):
        super().__init__(
            f"Cannot preprocess feature '{feature}': {reason}",
            "PREPROCESSING_ERROR",
            {"feature": feature, "reason": reason},
        )


class SplitError(MedfactException):
    """Raised when a cohort cannot be split as requested."""

    def __init__(self, message: str, records: int, parts: int):
        super().__init__(message, "SPLIT_ERROR", {"records": records, "parts": parts})


class MetricUndefinedError(MedfactException):
    """Raised when a metric is undefined for the given labels."""

    def __init__(self, metric: str, positives: int, negatives: int):
        super().__init__(
            f"{metric} is undefined for {positives} positives and {negatives} negatives",
            "METRIC_UNDEFINED",
            {"metric": metric, "positives": positives, "negatives": negatives},
        )


class NumericDivergenceError(MedfactException):
    """Raised when training produces a non-finite loss."""

    def __init__(self, epoch: int, batch: int, loss: float):
        super().__init__(
            f"Non-finite loss {loss} at epoch {epoch}, batch {batch}",
            "NUMERIC_DIVERGENCE",
            {"epoch": epoch, "batch": batch, "loss": repr(loss)},
        )
