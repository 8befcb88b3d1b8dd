"""Hand-built records for tests that need exact values"""

import numpy as np

from src.domain.entities.cohort import Cohort, PatientRecord


def make_record(
    patient_id: str,
    dynamic: list[list[float]],
    static: list[float] | None = None,
    label: int = 0,
) -> PatientRecord:
    return PatientRecord(
        id=patient_id,
        dynamic=np.array(dynamic, dtype=np.float64),
        static=np.array(static or [], dtype=np.float64),
        label=label,
    )


def make_cohort(records: list[PatientRecord], n_static: int = 0) -> Cohort:
    n_dynamic = records[0].n_dynamic
    return Cohort(
        records=tuple(records),
        dynamic_names=tuple(f"x{i:02d}" for i in range(n_dynamic)),
        static_names=tuple(f"s{i:02d}" for i in range(n_static)),
    )
