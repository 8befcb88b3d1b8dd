from src.domain.model.batch import PatientBatch
from src.domain.model.clustering import random_balanced_assignment, spectral_cluster
from src.domain.model.correlation import (
    all_ones_graph,
    build_graph,
    correlation_weighted_graph,
    estimate_correlations,
    laplacian_kernel,
)
from src.domain.model.embedding import embed_patient, gru_forward
from src.domain.model.interaction import gcn_layer, interact
from src.domain.model.network import ForwardPass, dynamic_embeddings, forward, predict, predict_patient
from src.domain.model.parameters import (
    EmbeddingParams,
    GcnParams,
    GruChannelParams,
    HeadParams,
    MedFactParams,
    initialize_params,
)
from src.domain.model.prediction import PredictionOutput, attend_predict, bce_loss

__all__ = [
    "PatientBatch",
    "random_balanced_assignment",
    "spectral_cluster",
    "all_ones_graph",
    "build_graph",
    "correlation_weighted_graph",
    "estimate_correlations",
    "laplacian_kernel",
    "embed_patient",
    "gru_forward",
    "gcn_layer",
    "interact",
    "ForwardPass",
    "dynamic_embeddings",
    "forward",
    "predict",
    "predict_patient",
    "EmbeddingParams",
    "GcnParams",
    "GruChannelParams",
    "HeadParams",
    "MedFactParams",
    "initialize_params",
    "PredictionOutput",
    "attend_predict",
    "bce_loss",
]
