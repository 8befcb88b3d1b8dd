"""
Per-feature embedding.

Every dynamic feature runs through its own univariate GRU; the static
vector goes through a linear layer. A shared projection followed by ReLU
aligns all F + 1 hidden states into one embedding space:

    z_i = ReLU(h_iT W_proj),   z_s = ReLU((s W_s) W_proj)

GRU convention: h_t = (1 - z_t) * h_{t-1} + z_t * h~_t, computed as
h_{t-1} + z_t * (h~_t - h_{t-1}).
"""

import numpy as np
import numpy.typing as npt

from src.domain.entities.cohort import PatientRecord
from src.domain.exceptions import ContractError
from src.domain.model.batch import PatientBatch
from src.domain.model.parameters import GruChannelParams, MedFactParams
from src.shared.numerics import autodiff as ad
from src.shared.numerics.autodiff import ComputeNode


def _gate(x: ComputeNode, h: ComputeNode, w: ComputeNode, u: ComputeNode, b: ComputeNode, ones: ComputeNode):
    return ad.add(ad.add(ad.matmul(x, w), ad.matmul(h, u)), ad.matmul(ones, b))


def gru_sequence(
    inputs: np.ndarray, lengths: np.ndarray, params: GruChannelParams[ComputeNode]
) -> ComputeNode:
    """
    Run one GRU over a batch of univariate series.

    Args:
        inputs: B x T_max values, zero padded
        lengths: true length of every series (>= 1)
        params: bound parameter nodes of this channel

    Returns:
        B x h node holding each series' hidden state after its last visit
    """
    batch, steps = inputs.shape
    if steps == 0 or np.any(lengths < 1):
        raise ContractError("gru_sequence", "every series needs at least one step")
    hidden = params.u_z.shape[0]
    ones = ad.constant(np.ones((batch, 1)))
    h = ad.constant(np.zeros((batch, hidden)))

    for t in range(steps):
        x = ad.constant(inputs[:, t : t + 1])
        z = ad.sigmoid(_gate(x, h, params.w_z, params.u_z, params.b_z, ones))
        r = ad.sigmoid(_gate(x, h, params.w_r, params.u_r, params.b_r, ones))
        candidate = ad.tanh(_gate(x, ad.mul(r, h), params.w_h, params.u_h, params.b_h, ones))
        h_next = ad.add(h, ad.mul(z, ad.add(candidate, ad.scale(h, -1.0))))

        active = lengths > t
        if active.all():
            h = h_next
        else:
            keep = ad.constant(np.repeat(active[:, None].astype(np.float64), hidden, axis=1))
            hold = ad.constant(1.0 - keep.value)
            h = ad.add(ad.mul(keep, h_next), ad.mul(hold, h))
    return h


def gru_forward(series: npt.ArrayLike, params: GruChannelParams[np.ndarray]) -> np.ndarray:
    """Final hidden state h_T of one GRU channel over one series"""
    values = np.asarray(series, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise ContractError("gru_forward", "series must not be empty")
    bound = GruChannelParams(**{k: ad.constant(v) for k, v in vars(params).items()})
    h = gru_sequence(values[None, :], np.array([values.size]), bound)
    return h.value[0].copy()


def embed_batch(batch: PatientBatch, params: MedFactParams[ComputeNode]) -> ComputeNode:
    """
    Embedding rows for a whole batch, feature-major.

    Returns:
        (F + 1) * B x d node; every entry >= 0
    """
    if batch.n_dynamic != params.n_dynamic:
        raise ContractError(
            "embed_batch",
            f"batch has {batch.n_dynamic} dynamic features, parameters have {params.n_dynamic}",
        )
    hidden_states = [
        gru_sequence(batch.dynamic[:, :, i], batch.lengths, channel)
        for i, channel in enumerate(params.channels)
    ]
    static_hidden = ad.matmul(ad.constant(batch.static), params.embedding.w_s)
    stacked = ad.concat_rows(hidden_states + [static_hidden])
    return ad.relu(ad.matmul(stacked, params.embedding.w_proj))


def embed_patient(record: PatientRecord, params: MedFactParams[np.ndarray]) -> np.ndarray:
    """EmbeddingMatrix Z of one patient: (F + 1) x d, last row is z_s"""
    if record.n_dynamic != params.n_dynamic:
        raise ContractError(
            "embed_patient",
            f"record has {record.n_dynamic} dynamic features, parameters have {params.n_dynamic}",
        )
    frozen = params.map(lambda _, value: ad.constant(value))
    return embed_batch(PatientBatch.from_records([record]), frozen).value.copy()
