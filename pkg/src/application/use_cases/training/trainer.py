"""
MedFACT training loop.

1. R <- all ones; K groups from a seeded random balanced partition; A from
   (R, groups).
2. Every epoch: shuffled mini-batches, forward, backward, Adam.
3. For the first CLUSTER_EPOCHS = ceil(fraction * epochs) epochs, the epoch
   ends by re-estimating R on the training split, re-clustering and
   rebuilding A. Afterwards A is frozen.
4. Validation after every epoch; the returned model is the best snapshot by
   validation AUPRC among epochs whose graph is the frozen one.

Ablations: "cor-" trains on the all-ones graph and never estimates R;
"clu-" re-estimates R in the clustering epochs but uses it unclustered as
the dynamic block of A.
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.application.dtos.config import TrainConfig
from src.application.services.metrics_service import ScoredSet, auprc, auroc
from src.application.services.split_service import stratified_subsample
from src.application.use_cases.training.optimizer import AdamState, adam_step
from src.domain.entities.cohort import Cohort, NormalizationStats, PatientRecord
from src.domain.enums import AblationMode
from src.domain.exceptions import ContractError, MetricUndefinedError, NumericDivergenceError
from src.domain.model.batch import PatientBatch
from src.domain.model.clustering import random_balanced_assignment, spectral_cluster
from src.domain.model.correlation import (
    all_ones_graph,
    build_graph,
    correlation_weighted_graph,
    estimate_correlations,
)
from src.domain.model.network import dynamic_embeddings, forward, predict
from src.domain.model.parameters import MedFactParams, initialize_params
from src.domain.model.prediction import mean_bce
from src.domain.value_objects.core import ClusterAssignment, CorrelationGraph, CorrelationMatrix
from src.shared.numerics import autodiff as ad
from src.shared.numerics.rng import SeededRng
from src.shared.telemetry.logging import get_logger
from src.shared.telemetry.tracing import add_span_event, traced

logger = get_logger(__name__)

# stream keys under the training seed
_INIT, _PARTITION, _SHUFFLE, _SAMPLE, _SUBSAMPLE = 0, 1, 2, 3, 4


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    val_loss: float | None
    val_auroc: float | None
    val_auprc: float | None
    graph_updated: bool
    groups: tuple[tuple[int, ...], ...] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "epoch": self.epoch,
            "train_loss": self.train_loss,
            "val_loss": self.val_loss,
            "val_auroc": self.val_auroc,
            "val_auprc": self.val_auprc,
            "graph_updated": self.graph_updated,
            "groups": [list(g) for g in self.groups] if self.groups is not None else None,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "EpochRecord":
        groups = data.get("groups")
        return cls(
            epoch=data["epoch"],
            train_loss=data["train_loss"],
            val_loss=data.get("val_loss"),
            val_auroc=data.get("val_auroc"),
            val_auprc=data.get("val_auprc"),
            graph_updated=data["graph_updated"],
            groups=tuple(tuple(g) for g in groups) if groups is not None else None,
        )


@dataclass(frozen=True, eq=False)
class TrainedModel:
    """Parameters with the R, groups and A they were trained with"""

    params: MedFactParams[np.ndarray]
    correlations: CorrelationMatrix
    assignment: ClusterAssignment
    graph: CorrelationGraph
    config: TrainConfig
    dynamic_names: tuple[str, ...]
    static_names: tuple[str, ...]
    normalization_stats: NormalizationStats | None
    best_epoch: int
    history: tuple[EpochRecord, ...] = field(default_factory=tuple)

    @property
    def n_dynamic(self) -> int:
        return len(self.dynamic_names)

    @property
    def recluster_events(self) -> int:
        return sum(1 for record in self.history if record.graph_updated)

    def predict(self, records: Sequence[PatientRecord]) -> tuple[np.ndarray, np.ndarray]:
        """Risk scores and attention weights"""
        if records and records[0].n_dynamic != self.n_dynamic:
            raise ContractError(
                "predict",
                f"records have {records[0].n_dynamic} dynamic features, the model has {self.n_dynamic}",
            )
        return predict(records, self.params, self.graph, degree_normalize=self.config.model.degree_normalize)


@dataclass(frozen=True, eq=False)
class _Snapshot:
    epoch: int
    score: float
    params: MedFactParams[np.ndarray]
    correlations: CorrelationMatrix
    assignment: ClusterAssignment
    graph: CorrelationGraph


def _single_group(n_dynamic: int) -> ClusterAssignment:
    return ClusterAssignment((tuple(range(n_dynamic)),), n_dynamic)


def _correlation_sample(records: Sequence[PatientRecord], cap: int, rng: SeededRng) -> list[PatientRecord]:
    if len(records) <= cap:
        return list(records)
    chosen = np.sort(rng.choice(len(records), cap, replace=False))
    return [records[i] for i in chosen]


def _validate(
    records: Sequence[PatientRecord],
    params: MedFactParams[np.ndarray],
    graph: CorrelationGraph,
    degree_normalize: bool,
) -> tuple[float | None, float | None, float | None]:
    if not records:
        return None, None, None
    scores, _ = predict(records, params, graph, degree_normalize=degree_normalize)
    labels = np.array([r.label for r in records])
    scored = ScoredSet(scores, labels)
    try:
        val_auroc: float | None = auroc(scored)
    except MetricUndefinedError:
        val_auroc = None
    try:
        val_auprc: float | None = auprc(scored)
    except MetricUndefinedError:
        val_auprc = None
    return mean_bce(scores, labels), val_auroc, val_auprc


def _monitor(record: EpochRecord) -> float:
    """Higher is better: validation AUPRC, else negative validation or training loss"""
    if record.val_auprc is not None:
        return record.val_auprc
    if record.val_loss is not None:
        return -record.val_loss
    return -record.train_loss


@traced("medfact.train")
def train(
    cohort: Cohort,
    train_indices: Sequence[int],
    validation_indices: Sequence[int],
    config: TrainConfig,
    *,
    on_epoch: Callable[[EpochRecord, CorrelationGraph], None] | None = None,
) -> TrainedModel:
    """
    Train on a preprocessed cohort.

    Args:
        cohort: Records without missing values
        train_indices: Records the model and R are fitted on
        validation_indices: Records early stopping and snapshot selection read
        config: Schedule, ablation and dimensions
        on_epoch: Called after every epoch with its record and the graph in use

    Raises:
        ContractError: If the training split is empty
        NumericDivergenceError: If a batch loss is not finite
    """
    if len(train_indices) == 0:
        raise ContractError("train", "the training split is empty")

    n_dynamic = cohort.n_dynamic
    mode = config.ablation
    k = config.resolve_k(n_dynamic) if mode == AblationMode.FULL else 1
    rng = SeededRng(config.seed)
    labels = cohort.labels
    train_indices = stratified_subsample(
        labels, list(train_indices), config.train_fraction, seed=config.seed + _SUBSAMPLE
    )
    train_records = [cohort.records[i] for i in train_indices]
    val_records = [cohort.records[i] for i in validation_indices]
    degree_normalize = config.model.degree_normalize

    params = initialize_params(
        n_dynamic,
        cohort.n_static,
        rng.child(_INIT),
        hidden_size=config.model.hidden_size,
        embed_dim=config.model.embed_dim,
        attention_dim=config.model.resolved_attention_dim,
    )
    correlations = CorrelationMatrix.ones(n_dynamic)
    if mode == AblationMode.FULL:
        assignment = random_balanced_assignment(n_dynamic, k, rng.child(_PARTITION))
        graph = build_graph(correlations, assignment)
    elif mode == AblationMode.CLU_MINUS:
        assignment = _single_group(n_dynamic)
        graph = correlation_weighted_graph(correlations)
    else:
        assignment = _single_group(n_dynamic)
        graph = all_ones_graph(n_dynamic)

    cluster_epochs = config.cluster_epochs if mode != AblationMode.COR_MINUS else 0
    first_eligible = max(cluster_epochs - 1, 0)
    state = AdamState.initial(params.named())
    history: list[EpochRecord] = []
    best: _Snapshot | None = None
    stale = 0
    logger.info(
        "Training %s on %d records (F=%d, K=%d, epochs=%d, cluster epochs=%d)",
        mode.value,
        len(train_records),
        n_dynamic,
        k,
        config.epochs,
        cluster_epochs,
    )

    for epoch in range(config.epochs):
        order = rng.child(_SHUFFLE, epoch).permutation(len(train_records))
        loss_sum = 0.0
        for batch_index, start in enumerate(range(0, len(order), config.batch_size)):
            batch = PatientBatch.from_records([train_records[i] for i in order[start : start + config.batch_size]])
            result = forward(batch, params.bind(), graph, degree_normalize=degree_normalize)
            loss = float(result.loss.value[0, 0])
            if not np.isfinite(loss):
                raise NumericDivergenceError(epoch, batch_index, loss)
            grads = ad.backward(result.loss)
            named, state = adam_step(params.named(), grads, state, config.learning_rate)
            params = params.replace_named(named)
            loss_sum += loss * batch.size
        train_loss = loss_sum / len(train_records)

        updated = epoch < cluster_epochs
        if updated:
            sample = _correlation_sample(train_records, config.kernel.sample_cap, rng.child(_SAMPLE, epoch))
            correlations = estimate_correlations(dynamic_embeddings(sample, params), config.kernel.bandwidth)
            if mode == AblationMode.FULL:
                assignment = spectral_cluster(correlations, k, seed=config.seed)
                graph = build_graph(correlations, assignment)
            else:
                graph = correlation_weighted_graph(correlations)

        val_loss, val_auroc, val_auprc = _validate(val_records, params, graph, degree_normalize)
        record = EpochRecord(
            epoch=epoch,
            train_loss=train_loss,
            val_loss=val_loss,
            val_auroc=val_auroc,
            val_auprc=val_auprc,
            graph_updated=updated,
            groups=assignment.groups if updated and mode == AblationMode.FULL else None,
        )
        history.append(record)
        if on_epoch is not None:
            on_epoch(record, graph)
        logger.info(
            "Epoch %d: train_loss=%.6f val_loss=%s val_auprc=%s graph_updated=%s",
            epoch,
            train_loss,
            f"{val_loss:.6f}" if val_loss is not None else "n/a",
            f"{val_auprc:.6f}" if val_auprc is not None else "n/a",
            updated,
        )
        add_span_event("epoch_completed", {"epoch": epoch, "train_loss": train_loss, "graph_updated": updated})

        if epoch < first_eligible:
            continue
        score = _monitor(record)
        if best is None or score > best.score:
            best = _Snapshot(epoch, score, params, correlations, assignment, graph)
            stale = 0
        else:
            stale += 1
            if stale >= config.patience:
                logger.info("Early stopping after epoch %d (best epoch %d)", epoch, best.epoch)
                break

    assert best is not None
    return TrainedModel(
        params=best.params,
        correlations=best.correlations,
        assignment=best.assignment,
        graph=best.graph,
        config=config,
        dynamic_names=cohort.dynamic_names,
        static_names=cohort.static_names,
        normalization_stats=cohort.normalization_stats,
        best_epoch=best.epoch,
        history=tuple(history),
    )
