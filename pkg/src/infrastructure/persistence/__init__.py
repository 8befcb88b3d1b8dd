from src.infrastructure.persistence.checkpoint import CheckpointRepository
from src.infrastructure.persistence.psv_cohort import load_psv_cohort, write_psv_cohort

__all__ = ["CheckpointRepository", "load_psv_cohort", "write_psv_cohort"]
