from src.domain.entities.cohort import Cohort, CohortStatistics, NormalizationStats, PatientRecord

__all__ = ["Cohort", "CohortStatistics", "NormalizationStats", "PatientRecord"]
