"""
Two-layer graph convolution over the correlation graph.

    g_l(Z) = ReLU(A Z W_l),   Z* = g_2(g_1(Z))

Layer 1 mixes features inside a group; layer 2 lets groups reach each other
through the static node. No biases. A is applied raw unless degree
normalization is requested.
"""

import numpy as np

from src.domain.exceptions import ShapeError
from src.domain.model.parameters import GcnParams
from src.domain.value_objects.core import CorrelationGraph
from src.shared.numerics import autodiff as ad
from src.shared.numerics import matrix as mx
from src.shared.numerics.autodiff import ComputeNode


def propagation_matrix(graph: CorrelationGraph, degree_normalize: bool = False) -> np.ndarray:
    """A, or D^{-1/2} A D^{-1/2} when degree_normalize is set"""
    a = graph.adjacency
    if not degree_normalize:
        return a
    inv_sqrt_degree = 1.0 / np.sqrt(a.sum(axis=1))
    return inv_sqrt_degree[:, None] * a * inv_sqrt_degree[None, :]


def gcn_layer(z: np.ndarray, graph: CorrelationGraph, w: np.ndarray, *, degree_normalize: bool = False) -> np.ndarray:
    """ReLU(A Z W) for one patient's (F + 1) x d embedding matrix"""
    if z.shape[0] != graph.n_nodes:
        raise ShapeError("gcn_layer", graph.adjacency.shape, z.shape)
    return mx.relu(mx.matmul(mx.matmul(propagation_matrix(graph, degree_normalize), z), w))


def interact(z: np.ndarray, graph: CorrelationGraph, params: GcnParams[np.ndarray], *, degree_normalize: bool = False) -> np.ndarray:
    """Z* = ReLU(A ReLU(A Z W_1) W_2)"""
    hidden = gcn_layer(z, graph, params.w_1, degree_normalize=degree_normalize)
    return gcn_layer(hidden, graph, params.w_2, degree_normalize=degree_normalize)


def _propagate(z: ComputeNode, adjacency: ComputeNode, batch_size: int) -> ComputeNode:
    # feature-major rows: (A kron I_B) Z == reshape(A @ reshape(Z, F+1, B*d))
    n_nodes = adjacency.shape[0]
    width = z.shape[1]
    stacked = ad.reshape(z, n_nodes, batch_size * width)
    return ad.reshape(ad.matmul(adjacency, stacked), n_nodes * batch_size, width)


def gcn_layer_batch(z: ComputeNode, adjacency: ComputeNode, w: ComputeNode, batch_size: int) -> ComputeNode:
    if z.shape[0] != adjacency.shape[0] * batch_size:
        raise ShapeError("gcn_layer", adjacency.shape, z.shape)
    return ad.relu(ad.matmul(_propagate(z, adjacency, batch_size), w))


def interact_batch(
    z: ComputeNode,
    graph: CorrelationGraph,
    params: GcnParams[ComputeNode],
    batch_size: int,
    *,
    degree_normalize: bool = False,
) -> ComputeNode:
    """Two GCN layers over a feature-major (F + 1) * B x d batch"""
    adjacency = ad.constant(propagation_matrix(graph, degree_normalize))
    hidden = gcn_layer_batch(z, adjacency, params.w_1, batch_size)
    return gcn_layer_batch(hidden, adjacency, params.w_2, batch_size)
