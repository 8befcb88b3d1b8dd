"""
Artifact Schema Definitions.

JSON Schemas for the checkpoint, the metric report and the K-sweep export.
Loaders validate against them before decoding, and tests validate what the
writers produce.
"""

from typing import Any

import jsonschema

from src.domain.enums import AblationMode
from src.shared.enums import MetricName

# Increment when making breaking changes to the checkpoint layout
CHECKPOINT_FORMAT_VERSION = 1

_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "number"}}}
_GROUPS = {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1}}
_NULLABLE_NUMBER = {"type": ["number", "null"]}


def get_checkpoint_schema_definition() -> dict[str, Any]:
    """JSON Schema of a checkpoint file: a digest next to the checkpoint body"""
    return {
        "$schema": "http://json-schema.org/draft-07/schema#",
        "type": "object",
        "required": ["format_version", "digest", "checkpoint"],
        "additionalProperties": False,
        "properties": {
            "format_version": {"type": "integer", "const": CHECKPOINT_FORMAT_VERSION},
            "digest": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
            "checkpoint": {
                "type": "object",
                "required": [
                    "config",
                    "seed",
                    "dynamic_names",
                    "static_names",
                    "normalization_stats",
                    "parameters",
                    "correlations",
                    "assignment",
                    "adjacency",
                    "best_epoch",
                    "history",
                ],
                "properties": {
                    "config": {"type": "object", "properties": {"ablation": {"enum": AblationMode.values()}}},
                    "seed": {"type": "integer", "minimum": 0},
                    "dynamic_names": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                    "static_names": {"type": "array", "items": {"type": "string"}},
                    "normalization_stats": {
                        "type": ["object", "null"],
                        "required": ["dynamic_mean", "dynamic_std", "static_mean", "static_std"],
                        "additionalProperties": {"type": "array", "items": {"type": "number"}},
                    },
                    "parameters": {"type": "object", "additionalProperties": _MATRIX},
                    "correlations": _MATRIX,
                    "assignment": _GROUPS,
                    "adjacency": _MATRIX,
                    "best_epoch": {"type": "integer", "minimum": 0},
                    "history": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["epoch", "train_loss", "graph_updated"],
                            "properties": {
                                "epoch": {"type": "integer"},
                                "train_loss": {"type": "number"},
                                "val_loss": _NULLABLE_NUMBER,
                                "val_auroc": _NULLABLE_NUMBER,
                                "val_auprc": _NULLABLE_NUMBER,
                                "graph_updated": {"type": "boolean"},
                                "groups": {"anyOf": [_GROUPS, {"type": "null"}]},
                            },
                        },
                    },
                },
            },
        },
    }


def get_metric_report_schema_definition() -> dict[str, Any]:
    """JSON Schema of a machine-readable metric report"""
    return {
        "$schema": "http://json-schema.org/draft-07/schema#",
        "type": "object",
        "required": ["metrics"],
        "properties": {
            "metrics": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["name", "value", "std", "resamples", "skipped"],
                    "properties": {
                        "name": {"enum": MetricName.values()},
                        "value": {"type": "number", "minimum": 0, "maximum": 1},
                        "std": {"anyOf": [{"type": "number", "minimum": 0}, {"type": "null"}]},
                        "resamples": {"type": "integer", "minimum": 0},
                        "skipped": {"type": "integer", "minimum": 0},
                    },
                },
            },
        },
    }


def get_sweep_export_schema_definition() -> dict[str, Any]:
    """JSON Schema of a cluster-evolution export"""
    named_groups = {"type": "array", "items": {"type": "array", "items": {"type": "string"}, "minItems": 1}}
    return {
        "$schema": "http://json-schema.org/draft-07/schema#",
        "type": "object",
        "required": ["features", "blocks", "transitions"],
        "properties": {
            "features": {"type": "array", "items": {"type": "string"}},
            "blocks": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["k", "groups", "assignment"],
                    "properties": {
                        "k": {"type": "integer", "minimum": 1},
                        "groups": named_groups,
                        "assignment": {"type": "object", "additionalProperties": {"type": "integer"}},
                        "metrics": {"type": "object"},
                    },
                },
            },
            "transitions": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["from_k", "to_k", "flows", "parents", "switched_fraction"],
                    "properties": {
                        "from_k": {"type": "integer"},
                        "to_k": {"type": "integer"},
                        "flows": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["source", "target", "count"],
                                "properties": {
                                    "source": {"type": "integer"},
                                    "target": {"type": "integer"},
                                    "count": {"type": "integer", "minimum": 1},
                                },
                            },
                        },
                        "parents": {"type": "array", "items": {"type": "integer"}},
                        "switched_fraction": {"type": "number", "minimum": 0, "maximum": 1},
                    },
                },
            },
        },
    }


def validate_artifact(payload: Any, schema: dict[str, Any]) -> list[str]:
    """
    Validate a payload against a schema without raising exceptions.

    Returns a list of validation errors (empty list if valid).
    """
    validator = jsonschema.Draft7Validator(schema)
    return [error.message for error in validator.iter_errors(payload)]
