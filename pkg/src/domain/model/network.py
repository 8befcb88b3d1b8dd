"""
End-to-end MedFACT network: embedding -> two-layer GCN -> attention head.

    y_hat = MedFACT(X, s)
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from src.domain.entities.cohort import PatientRecord
from src.domain.model.batch import PatientBatch, to_patient_major
from src.domain.model.embedding import embed_batch, embed_patient
from src.domain.model.interaction import interact, interact_batch
from src.domain.model.parameters import MedFactParams
from src.domain.model.prediction import PredictionOutput, attend_predict, attend_predict_batch
from src.domain.value_objects.core import CorrelationGraph
from src.shared.numerics import autodiff as ad
from src.shared.numerics.autodiff import ComputeNode

INFERENCE_BATCH = 256


@dataclass(frozen=True, eq=False)
class ForwardPass:
    loss: ComputeNode  # 1 x 1 mean BCE
    y_hat: ComputeNode  # B x 1
    alpha: ComputeNode  # B x (F + 1)


def forward(
    batch: PatientBatch,
    params: MedFactParams[ComputeNode],
    graph: CorrelationGraph,
    *,
    degree_normalize: bool = False,
) -> ForwardPass:
    """Record one mini-batch on the tape, ending in the mean batch loss"""
    z = embed_batch(batch, params)
    z_star = interact_batch(z, graph, params.gcn, batch.size, degree_normalize=degree_normalize)
    head = attend_predict_batch(z_star, params.head, batch.size)
    return ForwardPass(loss=ad.bce_mean(head.y_hat, batch.labels), y_hat=head.y_hat, alpha=head.alpha)


def _frozen(params: MedFactParams[np.ndarray]) -> MedFactParams[ComputeNode]:
    return params.map(lambda _, value: ad.constant(value))


def dynamic_embeddings(
    records: Sequence[PatientRecord],
    params: MedFactParams[np.ndarray],
    *,
    chunk: int = INFERENCE_BATCH,
) -> np.ndarray:
    """N x F x d dynamic embedding rows, the sample correlation estimation reads"""
    frozen = _frozen(params)
    parts = []
    for start in range(0, len(records), chunk):
        batch = PatientBatch.from_records(records[start : start + chunk])
        z = embed_batch(batch, frozen).value
        parts.append(to_patient_major(z, batch.n_nodes, batch.size)[:, :-1, :])
    return np.concatenate(parts, axis=0)


def predict(
    records: Sequence[PatientRecord],
    params: MedFactParams[np.ndarray],
    graph: CorrelationGraph,
    *,
    degree_normalize: bool = False,
    chunk: int = INFERENCE_BATCH,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Risk scores and attention weights for many patients.

    Returns:
        (N y_hat values, N x (F + 1) attention weights)
    """
    frozen = _frozen(params)
    scores, weights = [], []
    for start in range(0, len(records), chunk):
        batch = PatientBatch.from_records(records[start : start + chunk])
        z = embed_batch(batch, frozen)
        z_star = interact_batch(z, graph, frozen.gcn, batch.size, degree_normalize=degree_normalize)
        head = attend_predict_batch(z_star, frozen.head, batch.size)
        scores.append(head.y_hat.value[:, 0])
        weights.append(head.alpha.value)
    if not scores:
        return np.empty(0), np.empty((0, graph.n_nodes))
    return np.concatenate(scores), np.concatenate(weights, axis=0)


def predict_patient(
    record: PatientRecord,
    params: MedFactParams[np.ndarray],
    graph: CorrelationGraph,
    *,
    degree_normalize: bool = False,
) -> PredictionOutput:
    z = embed_patient(record, params)
    z_star = interact(z, graph, params.gcn, degree_normalize=degree_normalize)
    return attend_predict(z_star, params.head)
