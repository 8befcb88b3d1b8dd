"""
Cohort-wise feature correlation and correlation-graph construction.

    k(x, y) = exp(-||x - y||_1 / sigma)
    r_ij    = (1/N) sum_n k(z_i^(n), z_j^(n))

The graph joins every pair of dynamic features in the same group with
weight r_ij, joins every dynamic feature to the static node with weight 1,
and puts a unit self-loop on every node.
"""

import numpy as np
import numpy.typing as npt

from src.domain.exceptions import ContractError
from src.domain.value_objects.core import ClusterAssignment, CorrelationGraph, CorrelationMatrix
from src.shared.telemetry.logging import get_logger

logger = get_logger(__name__)

PATIENT_CHUNK = 256
MIN_CORRELATION = np.finfo(np.float64).tiny


def laplacian_kernel(x: npt.ArrayLike, y: npt.ArrayLike, sigma: float) -> float:
    """exp(-||x - y||_1 / sigma), in (0, 1] and symmetric"""
    if sigma <= 0:
        raise ContractError("laplacian_kernel", "sigma must be positive", sigma=sigma)
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    if a.shape != b.shape:
        raise ContractError("laplacian_kernel", "vectors must have equal lengths")
    return float(np.exp(-np.abs(a - b).sum() / sigma))


def pairwise_l1(embeddings: np.ndarray) -> np.ndarray:
    """
    L1 distances between every unordered feature pair of every patient.

    Args:
        embeddings: N x F x d dynamic embedding rows

    Returns:
        N x P array, P = F (F - 1) / 2, pairs in np.triu_indices(F, 1) order
    """
    n_patients, n_features, _ = embeddings.shape
    upper_i, upper_j = np.triu_indices(n_features, k=1)
    out = np.empty((n_patients, upper_i.size))
    for start in range(0, n_patients, PATIENT_CHUNK):
        chunk = embeddings[start : start + PATIENT_CHUNK]
        out[start : start + chunk.shape[0]] = np.abs(chunk[:, upper_i, :] - chunk[:, upper_j, :]).sum(axis=2)
    return out


def median_bandwidth(distances: np.ndarray) -> float:
    """Median pairwise L1 distance; 1.0 when the median is zero or undefined"""
    if distances.size == 0:
        return 1.0
    sigma = float(np.median(distances))
    return sigma if sigma > 0.0 else 1.0


def estimate_correlations(embeddings: npt.ArrayLike, bandwidth: float | str = "median") -> CorrelationMatrix:
    """
    Mean Laplacian-kernel similarity between feature embeddings.

    Each unordered pair is computed once and mirrored, and the diagonal is
    set to exactly 1, so R is exactly symmetric.

    Args:
        embeddings: N x F x d dynamic rows of N patients' embedding matrices
        bandwidth: positive sigma, or "median" for the median heuristic

    Raises:
        ContractError: If the sample is empty
    """
    z = np.asarray(embeddings, dtype=np.float64)
    if z.ndim != 3 or z.shape[0] == 0:
        raise ContractError("estimate_correlations", "needs a non-empty N x F x d sample")
    n_features = z.shape[1]

    distances = pairwise_l1(z)
    sigma = median_bandwidth(distances) if bandwidth == "median" else float(bandwidth)
    if sigma <= 0:
        raise ContractError("estimate_correlations", "sigma must be positive", sigma=sigma)

    pair_means = np.exp(-distances / sigma).mean(axis=0)
    r = np.eye(n_features)
    upper_i, upper_j = np.triu_indices(n_features, k=1)
    r[upper_i, upper_j] = np.maximum(pair_means, MIN_CORRELATION)
    r[upper_j, upper_i] = r[upper_i, upper_j]
    logger.debug("Estimated R over %d patients with sigma=%.6g", z.shape[0], sigma)
    return CorrelationMatrix(r)


def build_graph(correlations: CorrelationMatrix, assignment: ClusterAssignment) -> CorrelationGraph:
    """Adjacency with intra-group r_ij edges, unit static edges and unit self-loops"""
    n_features = correlations.n_features
    if assignment.n_features != n_features:
        raise ContractError(
            "build_graph",
            f"assignment covers {assignment.n_features} features, R has {n_features}",
        )
    a = np.zeros((n_features + 1, n_features + 1))
    for group in assignment.groups:
        members = np.array(group)
        a[np.ix_(members, members)] = correlations.values[np.ix_(members, members)]
    a[n_features, :] = 1.0
    a[:, n_features] = 1.0
    np.fill_diagonal(a, 1.0)
    return CorrelationGraph(a)


def all_ones_graph(n_features: int) -> CorrelationGraph:
    """Fully connected graph with every weight 1 (no correlation differences)"""
    return CorrelationGraph(np.ones((n_features + 1, n_features + 1)))


def correlation_weighted_graph(correlations: CorrelationMatrix) -> CorrelationGraph:
    """Fully connected graph whose dynamic block is R (no clustering)"""
    n_features = correlations.n_features
    a = np.ones((n_features + 1, n_features + 1))
    a[:n_features, :n_features] = correlations.values
    return CorrelationGraph(a)
