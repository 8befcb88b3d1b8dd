"""
Configuration models for MedFACT runs.

Every experiment input is a pydantic model so invariants are checked once,
at the boundary, and the validated model is what manifests record.
"""

import math
from datetime import datetime
from typing import Any, Literal, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.domain.enums import AblationMode
from src.domain.exceptions import ConfigValidationError

ModelT = TypeVar("ModelT", bound=BaseModel)


class SyntheticSpec(BaseModel):
    """Planted-structure cohort description"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_dynamic: int = Field(12, ge=1, description="F, dynamic feature count")
    n_static: int = Field(2, ge=0, description="S, static feature count")
    k_true: int = Field(3, ge=1, description="Planted group count")
    patients: int = Field(2000, ge=1, description="N")
    t_min: int = Field(12, ge=1)
    t_max: int = Field(20, ge=1)
    noise_std: float = Field(0.3, ge=0.0)
    seed: int = Field(7, ge=0)

    @model_validator(mode="after")
    def validate_ranges(self) -> "SyntheticSpec":
        if self.k_true > self.n_dynamic:
            raise ValueError("k_true must not exceed n_dynamic")
        if self.t_min > self.t_max:
            raise ValueError("t_min must not exceed t_max")
        return self


class SchemaConfig(BaseModel):
    """Column layout of a directory of pipe-separated patient files"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    dynamic_columns: list[str] = Field(min_length=1)
    static_columns: list[str] = Field(default_factory=list)
    label_column: str = "SepsisLabel"
    t_min: int = Field(1, ge=1)
    t_max: int | None = Field(None, ge=1)

    @model_validator(mode="after")
    def validate_columns(self) -> "SchemaConfig":
        columns = self.dynamic_columns + self.static_columns
        if len(set(columns)) != len(columns):
            raise ValueError("Column names must be unique across dynamic and static columns")
        if self.label_column in columns:
            raise ValueError("The label column cannot also be a feature column")
        if self.t_max is not None and self.t_max < self.t_min:
            raise ValueError("t_max must not be below t_min")
        return self


class KernelConfig(BaseModel):
    """Laplacian-kernel bandwidth and correlation sample cap"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    bandwidth: float | Literal["median"] = "median"
    sample_cap: int = Field(2048, ge=1, description="M, patients per correlation estimate")

    @field_validator("bandwidth")
    @classmethod
    def validate_bandwidth(cls, v: float | str) -> float | str:
        if not isinstance(v, str) and v <= 0:
            raise ValueError("bandwidth must be positive or 'median'")
        return v


class ModelConfig(BaseModel):
    """Network dimensions"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    hidden_size: int = Field(16, ge=1, description="h, GRU and static hidden size")
    embed_dim: int = Field(16, ge=1, description="d, aligned embedding width")
    attention_dim: int | None = Field(None, ge=1, description="d_a, defaults to d")
    degree_normalize: bool = False

    @property
    def resolved_attention_dim(self) -> int:
        return self.attention_dim or self.embed_dim


class TrainConfig(BaseModel):
    """Optimization schedule, graph ablation and early stopping"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    epochs: int = Field(30, ge=1)
    batch_size: int = Field(64, ge=1)
    learning_rate: float = Field(1e-3, gt=0.0)
    k: int | None = Field(None, ge=1, description="Cluster count; round(sqrt(F)) when unset")
    cluster_epoch_fraction: float = Field(0.2, ge=0.0, le=1.0)
    ablation: AblationMode = AblationMode.FULL
    seed: int = Field(0, ge=0)
    patience: int = Field(10, ge=1)
    train_fraction: float = Field(1.0, gt=0.0, le=1.0)
    kernel: KernelConfig = Field(default_factory=KernelConfig)
    model: ModelConfig = Field(default_factory=ModelConfig)

    @property
    def cluster_epochs(self) -> int:
        """Number of leading epochs that end with a graph update"""
        return math.ceil(self.cluster_epoch_fraction * self.epochs)

    def resolve_k(self, n_dynamic: int) -> int:
        k = self.k if self.k is not None else default_k(n_dynamic)
        if k > n_dynamic:
            raise ConfigValidationError("TrainConfig", [f"k={k} exceeds the {n_dynamic} dynamic features"])
        return k


class RunManifest(BaseModel):
    """What a command did, enough to rerun it"""

    run_id: str
    created_at: datetime
    command: str
    config: dict[str, Any]
    seed: int | None = None
    outputs: dict[str, str] = Field(default_factory=dict, description="file name -> sha256")
    trace_id: str | None = None


def default_k(n_dynamic: int) -> int:
    """K = round(sqrt(F)), at least 1"""
    return max(1, int(round(math.sqrt(n_dynamic))))


def build_config(
    model: type[ModelT],
    file_values: dict[str, Any] | None = None,
    overrides: dict[str, Any] | None = None,
) -> ModelT:
    """
    Merge configuration sources: flags > config file > defaults.

    Nested dictionaries are merged key by key; None overrides are ignored
    so unset flags fall through to the file or the model default.
    """
    merged = deep_merge(file_values or {}, {k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return model.model_validate(merged)
    except ValidationError as e:
        raise ConfigValidationError(
            model.__name__,
            [{"loc": list(err["loc"]), "msg": err["msg"]} for err in e.errors()],
        ) from e


def deep_merge(base: dict[str, Any], top: dict[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in top.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged
