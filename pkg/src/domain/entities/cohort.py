"""
Cohort domain entities.

A PatientRecord is one patient's visits (rows in time order, one column per
dynamic feature), a static vector and a patient-level binary label. Missing
values are NaN until preprocessing fills them.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field, replace

import numpy as np

from src.domain.exceptions import ContractError


@dataclass(frozen=True, eq=False)
class PatientRecord:
    """One patient: dynamic T x F matrix, static length-S vector, label y"""

    id: str
    dynamic: np.ndarray
    static: np.ndarray
    label: int

    def __post_init__(self) -> None:
        dynamic = np.asarray(self.dynamic, dtype=np.float64)
        static = np.asarray(self.static, dtype=np.float64).reshape(-1)
        if dynamic.ndim != 2 or dynamic.shape[0] < 1:
            raise ContractError("PatientRecord", "dynamic must be T x F with T >= 1", patient=self.id)
        if self.label not in (0, 1):
            raise ContractError("PatientRecord", "label must be 0 or 1", patient=self.id)
        object.__setattr__(self, "dynamic", dynamic)
        object.__setattr__(self, "static", static)

    @property
    def visit_count(self) -> int:
        return self.dynamic.shape[0]

    @property
    def n_dynamic(self) -> int:
        return self.dynamic.shape[1]

    def has_missing(self) -> bool:
        return bool(np.isnan(self.dynamic).any() or np.isnan(self.static).any())


@dataclass(frozen=True)
class NormalizationStats:
    """Training-split statistics used for imputation and z-scoring"""

    dynamic_mean: tuple[float, ...]
    dynamic_std: tuple[float, ...]
    static_mean: tuple[float, ...]
    static_std: tuple[float, ...]


@dataclass(frozen=True)
class CohortStatistics:
    """Dataset-statistics table fields"""

    patients: int
    visits: int
    avg_visits: float
    max_visits: int
    min_visits: int
    dynamic_features: int
    static_features: int
    positive_rate: float


@dataclass(frozen=True)
class Cohort:
    """Records sharing one dynamic and one static feature layout"""

    records: tuple[PatientRecord, ...]
    dynamic_names: tuple[str, ...]
    static_names: tuple[str, ...]
    normalization_stats: NormalizationStats | None = None
    dropped_short: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))
        for record in self.records:
            if record.dynamic.shape[1] != len(self.dynamic_names) or record.static.size != len(
                self.static_names
            ):
                raise ContractError(
                    "Cohort",
                    "record layout differs from the cohort's feature names",
                    patient=record.id,
                )

    def __len__(self) -> int:
        return len(self.records)

    @property
    def n_dynamic(self) -> int:
        return len(self.dynamic_names)

    @property
    def n_static(self) -> int:
        return len(self.static_names)

    @property
    def feature_names(self) -> tuple[str, ...]:
        return self.dynamic_names + self.static_names

    @property
    def labels(self) -> np.ndarray:
        return np.array([r.label for r in self.records], dtype=np.int64)

    @property
    def positive_fraction(self) -> float:
        return float(self.labels.mean()) if self.records else 0.0

    def subset(self, indices: Sequence[int]) -> "Cohort":
        return replace(self, records=tuple(self.records[i] for i in indices))

    def statistics(self) -> CohortStatistics:
        lengths = np.array([r.visit_count for r in self.records], dtype=np.int64)
        return CohortStatistics(
            patients=len(self.records),
            visits=int(lengths.sum()),
            avg_visits=float(lengths.mean()) if lengths.size else 0.0,
            max_visits=int(lengths.max()) if lengths.size else 0,
            min_visits=int(lengths.min()) if lengths.size else 0,
            dynamic_features=self.n_dynamic,
            static_features=self.n_static,
            positive_rate=self.positive_fraction,
        )
