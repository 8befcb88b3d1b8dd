"""
Mini-batch layout.

Ragged visit sequences are stored right-padded with zeros next to their
true lengths; recurrent steps past a patient's length leave its hidden
state untouched, so padding never reaches the final state.

Node matrices inside a batch are feature-major: row i * B + b holds node i
(dynamic features 0..F-1, then the static node F) of patient b.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from src.domain.entities.cohort import PatientRecord
from src.domain.exceptions import ContractError


@dataclass(frozen=True, eq=False)
class PatientBatch:
    dynamic: np.ndarray  # B x T_max x F, zero padded
    lengths: np.ndarray  # B
    static: np.ndarray  # B x S
    labels: np.ndarray  # B

    @property
    def size(self) -> int:
        return self.lengths.shape[0]

    @property
    def n_dynamic(self) -> int:
        return self.dynamic.shape[2]

    @property
    def n_nodes(self) -> int:
        return self.n_dynamic + 1

    @classmethod
    def from_records(cls, records: Sequence[PatientRecord]) -> "PatientBatch":
        if not records:
            raise ContractError("PatientBatch", "a batch needs at least one record")
        n_dynamic = records[0].n_dynamic
        n_static = records[0].static.size
        lengths = np.array([r.visit_count for r in records], dtype=np.int64)
        dynamic = np.zeros((len(records), int(lengths.max()), n_dynamic))
        static = np.zeros((len(records), n_static))
        for b, record in enumerate(records):
            if record.n_dynamic != n_dynamic or record.static.size != n_static:
                raise ContractError("PatientBatch", "records disagree on feature counts", patient=record.id)
            if record.has_missing():
                raise ContractError("PatientBatch", "records must be preprocessed", patient=record.id)
            dynamic[b, : record.visit_count] = record.dynamic
            static[b] = record.static
        labels = np.array([r.label for r in records], dtype=np.float64)
        return cls(dynamic=dynamic, lengths=lengths, static=static, labels=labels)


def to_patient_major(values: np.ndarray, n_nodes: int, batch_size: int) -> np.ndarray:
    """Feature-major (n_nodes * B) x d rows -> B x n_nodes x d"""
    return values.reshape(n_nodes, batch_size, -1).transpose(1, 0, 2)
