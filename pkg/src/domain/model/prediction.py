"""
Static-query attention head.

    q_s = z*_s W_q,   k_i = z*_i W_k,   v_i = z*_i W_v     (i = 1..F, s)
    tau_i = tanh(q_s . k_i),   alpha = softmax(tau)
    e = sum_i alpha_i v_i   (the static value takes part)
    y_hat = sigmoid(e W_pred)
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from src.domain.exceptions import ShapeError
from src.domain.model.parameters import HeadParams
from src.shared.numerics import autodiff as ad
from src.shared.numerics import matrix as mx
from src.shared.numerics.autodiff import BCE_EPSILON, ComputeNode


@dataclass(frozen=True, eq=False)
class PredictionOutput:
    """Risk, attention weights over the F + 1 nodes and the representation e"""

    y_hat: float
    alpha: np.ndarray
    representation: np.ndarray


def attend_predict(z_star: np.ndarray, params: HeadParams[np.ndarray]) -> PredictionOutput:
    """Prediction for one patient's interacted (F + 1) x d matrix"""
    z = mx.as_matrix(z_star, name="Z*")
    if z.shape[1] != params.w_q.shape[0]:
        raise ShapeError("attend_predict", z.shape, params.w_q.shape)
    query = mx.matmul(z[-1:], params.w_q)
    keys = mx.matmul(z, params.w_k)
    values = mx.matmul(z, params.w_v)
    tau = mx.tanh(mx.matmul(keys, query.T).T)
    alpha = mx.softmax_rows(tau)
    representation = mx.matmul(alpha, values)
    y_hat = mx.sigmoid(mx.matmul(representation, params.w_pred))
    return PredictionOutput(
        y_hat=float(y_hat[0, 0]),
        alpha=alpha[0].copy(),
        representation=representation[0].copy(),
    )


@dataclass(frozen=True, eq=False)
class BatchPrediction:
    y_hat: ComputeNode  # B x 1
    alpha: ComputeNode  # B x (F + 1)


def attend_predict_batch(z_star: ComputeNode, params: HeadParams[ComputeNode], batch_size: int) -> BatchPrediction:
    """
    Attention head over a feature-major (F + 1) * B x d batch.

    The static node's rows are the last B rows; every per-patient dot
    product and weighted sum is written with row-aligned products and
    reshapes so gradients flow through the tape.
    """
    rows, width = z_star.shape
    if width != params.w_q.shape[0]:
        raise ShapeError("attend_predict", z_star.shape, params.w_q.shape)
    n_nodes = rows // batch_size
    d_a = params.w_q.shape[1]

    query = ad.matmul(ad.slice_rows(z_star, (n_nodes - 1) * batch_size, rows), params.w_q)
    keys = ad.matmul(z_star, params.w_k)
    values = ad.matmul(z_star, params.w_v)

    query_rows = ad.concat_rows([query] * n_nodes)
    scores = ad.matmul(ad.mul(query_rows, keys), ad.constant(np.ones((d_a, 1))))
    tau = ad.transpose(ad.reshape(ad.tanh(scores), n_nodes, batch_size))
    alpha = ad.softmax_rows(tau)

    alpha_rows = ad.reshape(ad.transpose(alpha), rows, 1)
    weighted = ad.mul(ad.matmul(alpha_rows, ad.constant(np.ones((1, d_a)))), values)
    summed = ad.matmul(ad.constant(np.ones((1, n_nodes))), ad.reshape(weighted, n_nodes, batch_size * d_a))
    representation = ad.reshape(summed, batch_size, d_a)
    y_hat = ad.sigmoid(ad.matmul(representation, params.w_pred))
    return BatchPrediction(y_hat=y_hat, alpha=alpha)


def bce_loss(y_hat: float, y: int) -> float:
    """-y ln y_hat - (1 - y) ln(1 - y_hat), y_hat clamped to [1e-12, 1 - 1e-12]"""
    p = min(max(float(y_hat), BCE_EPSILON), 1.0 - BCE_EPSILON)
    return float(-y * np.log(p) - (1 - y) * np.log1p(-p))


def mean_bce(y_hat: npt.ArrayLike, labels: npt.ArrayLike) -> float:
    p = np.clip(np.asarray(y_hat, dtype=np.float64), BCE_EPSILON, 1.0 - BCE_EPSILON)
    y = np.asarray(labels, dtype=np.float64)
    return float(np.mean(-y * np.log(p) - (1.0 - y) * np.log1p(-p)))
