"""Domain enumerations for the MedFACT pipeline."""

from enum import Enum


class AblationMode(str, Enum):
    """How the correlation graph is built during training"""

    FULL = "full"
    COR_MINUS = "cor-"
    CLU_MINUS = "clu-"

    @classmethod
    def values(cls) -> list[str]:
        """Get all valid values"""
        return [mode.value for mode in cls]


class SplitMode(str, Enum):
    """Cohort split strategies"""

    HOLDOUT = "holdout"
    KFOLD = "kfold"
