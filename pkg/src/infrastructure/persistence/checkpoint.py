"""
Checkpoint codec.

A checkpoint is one JSON document holding every parameter array, R, the
groups, A, the resolved config, the seed, normalization statistics and the
training history. Floats are written with repr precision, so reloading
reproduces every array bit for bit. The body's canonical-JSON SHA-256 is
stored next to it and re-checked on load.
"""

from dataclasses import asdict
from typing import Any

import numpy as np

from src.application.dtos.config import TrainConfig
from src.application.interfaces.storage import IArtifactStore
from src.application.services.hash_service import HashService
from src.application.use_cases.training.trainer import EpochRecord, TrainedModel
from src.domain.entities.cohort import NormalizationStats
from src.domain.model.parameters import initialize_params
from src.domain.value_objects.core import ClusterAssignment, CorrelationGraph, CorrelationMatrix
from src.infrastructure.exceptions import ArtifactChecksumMismatchError, CheckpointFormatError
from src.infrastructure.persistence.artifact_schemas import (
    CHECKPOINT_FORMAT_VERSION,
    get_checkpoint_schema_definition,
    validate_artifact,
)
from src.shared.numerics.rng import SeededRng
from src.shared.telemetry.logging import get_logger

logger = get_logger(__name__)


def encode_checkpoint(model: TrainedModel) -> dict[str, Any]:
    stats = model.normalization_stats
    return {
        "config": model.config.model_dump(mode="json"),
        "seed": model.config.seed,
        "dynamic_names": list(model.dynamic_names),
        "static_names": list(model.static_names),
        "normalization_stats": {k: list(v) for k, v in asdict(stats).items()} if stats is not None else None,
        "parameters": {name: value.tolist() for name, value in model.params.named().items()},
        "correlations": model.correlations.values.tolist(),
        "assignment": [list(g) for g in model.assignment.groups],
        "adjacency": model.graph.adjacency.tolist(),
        "best_epoch": model.best_epoch,
        "history": [record.to_dict() for record in model.history],
    }


def decode_checkpoint(body: dict[str, Any]) -> TrainedModel:
    config = TrainConfig.model_validate(body["config"])
    dynamic_names = tuple(body["dynamic_names"])
    static_names = tuple(body["static_names"])

    # the structure comes from a throwaway init; values come from the file
    template = initialize_params(
        len(dynamic_names),
        len(static_names),
        SeededRng(0),
        hidden_size=config.model.hidden_size,
        embed_dim=config.model.embed_dim,
        attention_dim=config.model.resolved_attention_dim,
    )
    params = template.replace_named({name: np.array(v, dtype=np.float64) for name, v in body["parameters"].items()})
    for name, value in params.named().items():
        expected = template.named()[name].shape
        if value.shape != expected:
            raise CheckpointFormatError(name, f"shape {value.shape} differs from {expected}")

    stats = body["normalization_stats"]
    return TrainedModel(
        params=params,
        correlations=CorrelationMatrix(np.array(body["correlations"], dtype=np.float64)),
        assignment=ClusterAssignment(tuple(tuple(g) for g in body["assignment"]), len(dynamic_names)),
        graph=CorrelationGraph(np.array(body["adjacency"], dtype=np.float64)),
        config=config,
        dynamic_names=dynamic_names,
        static_names=static_names,
        normalization_stats=NormalizationStats(**{k: tuple(v) for k, v in stats.items()}) if stats else None,
        best_epoch=body["best_epoch"],
        history=tuple(EpochRecord.from_dict(r) for r in body["history"]),
    )


class CheckpointRepository:
    """Saves and loads TrainedModel checkpoints through an artifact store"""

    def __init__(self, store: IArtifactStore, hash_service: HashService | None = None):
        self.store = store
        self.hash_service = hash_service or HashService()

    def save(self, model: TrainedModel, ref: str = "checkpoint.json") -> str:
        """
        Returns:
            SHA-256 checksum of the written file
        """
        body = encode_checkpoint(model)
        document = {
            "format_version": CHECKPOINT_FORMAT_VERSION,
            "digest": self.hash_service.digest(body),
            "checkpoint": body,
        }
        return self.store.write_json(ref, document)

    def load(self, ref: str) -> TrainedModel:
        """
        Raises:
            ArtifactNotFoundError: If the file doesn't exist
            CheckpointFormatError: If the document breaks the checkpoint schema
            ArtifactChecksumMismatchError: If the body was modified
        """
        path = str(self.store.path(ref))
        document = self.store.read_json(ref)
        errors = validate_artifact(document, get_checkpoint_schema_definition())
        if errors:
            raise CheckpointFormatError(path, "; ".join(errors[:5]))

        actual = self.hash_service.digest(document["checkpoint"])
        if actual != document["digest"]:
            raise ArtifactChecksumMismatchError(path, document["digest"], actual)

        try:
            model = decode_checkpoint(document["checkpoint"])
        except (KeyError, TypeError, ValueError) as e:
            raise CheckpointFormatError(path, str(e)) from e
        logger.info("Loaded checkpoint %s (F=%d, K=%d)", path, model.n_dynamic, model.assignment.k)
        return model
