"""
Spectral clustering of dynamic features.

R is used as the affinity matrix. With D = diag(row sums of R), the
normalized Laplacian L = I - D^{-1/2} R D^{-1/2} is decomposed, the
eigenvectors of its K smallest eigenvalues form an F x K embedding whose
rows are scaled to unit length, and k-means groups the rows.

k-means: k-means++ seeding, 10 restarts, at most 100 Lloyd iterations,
lowest within-cluster sum of squares wins (earliest restart on ties).
Assignment ties go to the lowest cluster index. An empty cluster takes
the point farthest from its own centroid among clusters with more than
one member.
"""

import numpy as np

from src.domain.exceptions import ContractError
from src.domain.value_objects.core import ClusterAssignment, CorrelationMatrix
from src.shared.numerics.eigen import symmetric_eigen
from src.shared.numerics.rng import SeededRng
from src.shared.telemetry.logging import get_logger

logger = get_logger(__name__)

KMEANS_RESTARTS = 10
KMEANS_MAX_ITER = 100


def _squared_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    return ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)


def kmeans_plusplus(points: np.ndarray, k: int, rng: SeededRng) -> np.ndarray:
    n_points = points.shape[0]
    centroids = np.empty((k, points.shape[1]))
    centroids[0] = points[rng.integers(0, n_points)]
    for c in range(1, k):
        nearest = _squared_distances(points, centroids[:c]).min(axis=1)
        total = nearest.sum()
        if total > 0.0:
            index = int(rng.choice(n_points, 1, replace=False, p=nearest / total)[0])
        else:
            index = rng.integers(0, n_points)
        centroids[c] = points[index]
    return centroids


def _repair_empty(points: np.ndarray, labels: np.ndarray, centroids: np.ndarray, k: int) -> np.ndarray:
    labels = labels.copy()
    for empty in range(k):
        if np.any(labels == empty):
            continue
        counts = np.bincount(labels, minlength=k)
        own = ((points - centroids[labels]) ** 2).sum(axis=1)
        own[counts[labels] <= 1] = -np.inf
        donor = int(np.argmax(own))
        labels[donor] = empty
        centroids[empty] = points[donor]
    return labels


def kmeans(
    points: np.ndarray,
    k: int,
    rng: SeededRng,
    *,
    restarts: int = KMEANS_RESTARTS,
    max_iter: int = KMEANS_MAX_ITER,
) -> np.ndarray:
    """Cluster labels (0..k-1) of the best of `restarts` k-means runs"""
    n_points = points.shape[0]
    if not 1 <= k <= n_points:
        raise ContractError("kmeans", f"k={k} outside [1, {n_points}]")

    best_labels: np.ndarray | None = None
    best_inertia = np.inf
    for restart in range(restarts):
        centroids = kmeans_plusplus(points, k, rng.child(restart))
        labels = np.argmin(_squared_distances(points, centroids), axis=1)
        for _ in range(max_iter):
            labels = _repair_empty(points, labels, centroids, k)
            centroids = np.stack([points[labels == c].mean(axis=0) for c in range(k)])
            updated = np.argmin(_squared_distances(points, centroids), axis=1)
            if np.array_equal(updated, labels):
                break
            labels = updated
        labels = _repair_empty(points, labels, centroids, k)
        centroids = np.stack([points[labels == c].mean(axis=0) for c in range(k)])
        inertia = float(((points - centroids[labels]) ** 2).sum())
        if inertia < best_inertia:
            best_inertia, best_labels = inertia, labels
    assert best_labels is not None
    return best_labels


def spectral_embedding(correlations: CorrelationMatrix, k: int) -> np.ndarray:
    """Row-normalized eigenvectors of the K smallest normalized-Laplacian eigenvalues"""
    r = correlations.values
    inv_sqrt_degree = 1.0 / np.sqrt(r.sum(axis=1))
    laplacian = np.eye(r.shape[0]) - inv_sqrt_degree[:, None] * r * inv_sqrt_degree[None, :]
    laplacian = 0.5 * (laplacian + laplacian.T)
    _, vectors = symmetric_eigen(laplacian, k)
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    return np.divide(vectors, norms, out=np.zeros_like(vectors), where=norms > 0.0)


def spectral_cluster(correlations: CorrelationMatrix, k: int, seed: int) -> ClusterAssignment:
    """
    Group the F dynamic features into K groups of strongly correlated features.

    Raises:
        ContractError: If K is outside [1, F]
    """
    n_features = correlations.n_features
    if not 1 <= k <= n_features:
        raise ContractError("spectral_cluster", f"K={k} outside [1, {n_features}]")
    if k == 1:
        return ClusterAssignment((tuple(range(n_features)),), n_features)

    labels = kmeans(spectral_embedding(correlations, k), k, SeededRng(seed))
    assignment = ClusterAssignment.from_labels(labels)
    logger.debug("Spectral clustering K=%d group sizes %s", k, [len(g) for g in assignment.groups])
    return assignment


def random_balanced_assignment(n_features: int, k: int, rng: SeededRng) -> ClusterAssignment:
    """A seeded permutation cut into K near-equal groups"""
    if not 1 <= k <= n_features:
        raise ContractError("random_balanced_assignment", f"K={k} outside [1, {n_features}]")
    chunks = np.array_split(rng.permutation(n_features), k)
    return ClusterAssignment(tuple(tuple(int(i) for i in chunk) for chunk in chunks), n_features)


def between_group_sum(correlations: CorrelationMatrix, assignment: ClusterAssignment) -> float:
    """Sum of r_ij over unordered pairs in different groups"""
    labels = assignment.labels()
    different = labels[:, None] != labels[None, :]
    return float(np.triu(correlations.values * different, k=1).sum())
