"""
K sweep and cluster-evolution export.

For each K the features are grouped either by a model retrained with that K
or by spectral clustering of one R estimated from a single trained
embedding. Between consecutive K the export records sankey flows (source
group -> target group counts), each target group's parent (the source group
contributing most of its features, lowest index on ties) and the fraction
of features that land outside their group's parent.
"""

from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.application.dtos.config import TrainConfig
from src.application.services.metrics_service import ScoredSet, auprc, auroc
from src.application.services.preprocessing_service import preprocess
from src.application.services.split_service import holdout_split
from src.application.use_cases.training.trainer import TrainedModel, train
from src.domain.entities.cohort import Cohort
from src.domain.exceptions import ContractError, MetricUndefinedError
from src.domain.model.clustering import spectral_cluster
from src.domain.model.correlation import estimate_correlations
from src.domain.model.network import dynamic_embeddings
from src.domain.value_objects.core import ClusterAssignment
from src.shared.telemetry.logging import get_logger
from src.shared.telemetry.tracing import traced

logger = get_logger(__name__)


@dataclass(frozen=True)
class SweepBlock:
    k: int
    assignment: ClusterAssignment
    metrics: dict[str, float | None] = field(default_factory=dict)


@dataclass(frozen=True)
class Transition:
    from_k: int
    to_k: int
    flows: tuple[tuple[int, int, int], ...]  # (source, target, count)
    parents: tuple[int, ...]
    switched_fraction: float


def transition(source: ClusterAssignment, target: ClusterAssignment) -> Transition:
    source_of, target_of = source.labels(), target.labels()
    counts = Counter(zip(source_of.tolist(), target_of.tolist()))
    parents = []
    for t in range(target.k):
        inflow = [(counts.get((s, t), 0), -s) for s in range(source.k)]
        parents.append(-max(inflow)[1])
    switched = sum(1 for i in range(source.n_features) if parents[target_of[i]] != source_of[i])
    return Transition(
        from_k=source.k,
        to_k=target.k,
        flows=tuple((s, t, n) for (s, t), n in sorted(counts.items())),
        parents=tuple(parents),
        switched_fraction=switched / source.n_features,
    )


@dataclass(frozen=True)
class SweepExport:
    features: tuple[str, ...]
    blocks: tuple[SweepBlock, ...]

    @property
    def transitions(self) -> tuple[Transition, ...]:
        return tuple(transition(a.assignment, b.assignment) for a, b in zip(self.blocks, self.blocks[1:]))

    def to_dict(self) -> dict[str, Any]:
        return {
            "features": list(self.features),
            "blocks": [
                {
                    "k": block.k,
                    "groups": block.assignment.named_groups(self.features),
                    "assignment": {
                        name: int(g) for name, g in zip(self.features, block.assignment.labels())
                    },
                    **({"metrics": block.metrics} if block.metrics else {}),
                }
                for block in self.blocks
            ],
            "transitions": [
                {
                    "from_k": t.from_k,
                    "to_k": t.to_k,
                    "flows": [{"source": s, "target": g, "count": n} for s, g, n in t.flows],
                    "parents": list(t.parents),
                    "switched_fraction": t.switched_fraction,
                }
                for t in self.transitions
            ],
        }


def _split_metrics(model: TrainedModel, cohort: Cohort, indices: Sequence[int], prefix: str) -> dict[str, float | None]:
    scores, _ = model.predict([cohort.records[i] for i in indices])
    scored = ScoredSet(scores, cohort.labels[list(indices)])
    out: dict[str, float | None] = {}
    for name, metric in (("auroc", auroc), ("auprc", auprc)):
        try:
            out[f"{prefix}_{name}"] = metric(scored)
        except MetricUndefinedError:
            out[f"{prefix}_{name}"] = None
    return out


@traced("medfact.sweep_k")
def sweep_k(cohort: Cohort, ks: Sequence[int], config: TrainConfig, *, retrain: bool = False) -> SweepExport:
    """
    Group the features at every K of `ks` (sorted ascending in the export).

    Raises:
        ContractError: If `ks` is empty or a K exceeds F
    """
    if not ks:
        raise ContractError("sweep_k", "needs at least one K")
    ordered = sorted(set(ks))
    if ordered[0] < 1 or ordered[-1] > cohort.n_dynamic:
        raise ContractError("sweep_k", f"every K must lie in [1, {cohort.n_dynamic}]", ks=ordered)

    split = holdout_split(cohort.labels, config.seed)
    prepared = preprocess(cohort, split.train)
    blocks = []
    if retrain:
        for k in ordered:
            model = train(prepared, split.train, split.validation, config.model_copy(update={"k": k}))
            metrics = {
                **_split_metrics(model, prepared, split.validation, "val"),
                **_split_metrics(model, prepared, split.test, "test"),
            }
            blocks.append(SweepBlock(k=k, assignment=model.assignment, metrics=metrics))
            logger.info("K=%d retrained: groups %s", k, [len(g) for g in model.assignment.groups])
    else:
        model = train(prepared, split.train, split.validation, config)
        train_records = [prepared.records[i] for i in split.train]
        sample = train_records[: config.kernel.sample_cap]
        correlations = estimate_correlations(dynamic_embeddings(sample, model.params), config.kernel.bandwidth)
        for k in ordered:
            blocks.append(SweepBlock(k=k, assignment=spectral_cluster(correlations, k, seed=config.seed)))
    return SweepExport(features=cohort.dynamic_names, blocks=tuple(blocks))
