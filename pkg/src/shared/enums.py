"""
Shared enumerations for the MedFACT application.

Note: AblationMode and SplitMode are in src/domain/enums.py as they are model concepts.
"""

from enum import Enum


class ReportFormat(str, Enum):
    """Output format for command reports"""

    TEXT = "text"
    MACHINE = "machine"


class MetricName(str, Enum):
    """Binary-classification metrics reported by evaluation"""

    AUROC = "auroc"
    AUPRC = "auprc"
    MIN_P_SE = "min_p_se"

    @classmethod
    def values(cls) -> list[str]:
        """Get all valid values"""
        return [metric.value for metric in cls]
