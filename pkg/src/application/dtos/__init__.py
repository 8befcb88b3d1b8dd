from src.application.dtos.config import (
    KernelConfig,
    ModelConfig,
    RunManifest,
    SchemaConfig,
    SyntheticSpec,
    TrainConfig,
    build_config,
    deep_merge,
    default_k,
)

__all__ = [
    "KernelConfig",
    "ModelConfig",
    "RunManifest",
    "SchemaConfig",
    "SyntheticSpec",
    "TrainConfig",
    "build_config",
    "deep_merge",
    "default_k",
]
