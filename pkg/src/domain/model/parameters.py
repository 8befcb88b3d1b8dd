"""
Parameter groups of the MedFACT network.

Each container is generic over its leaf type: it holds numpy arrays at rest
and ComputeNodes while a forward pass is being recorded (see `bind`).
Names are stable ("gru.3.u_z", "head.w_pred", ...) and are what
checkpoints, gradient maps and the optimizer key on.
"""

from collections.abc import Callable
from dataclasses import dataclass, fields
from typing import Generic, TypeVar

import numpy as np

from src.domain.exceptions import ContractError
from src.shared.numerics import autodiff as ad
from src.shared.numerics.rng import SeededRng

T = TypeVar("T")
U = TypeVar("U")


@dataclass(frozen=True)
class GruChannelParams(Generic[T]):
    """One univariate GRU: input weights 1 x h, recurrent h x h, biases 1 x h"""

    w_z: T
    u_z: T
    b_z: T
    w_r: T
    u_r: T
    b_r: T
    w_h: T
    u_h: T
    b_h: T


@dataclass(frozen=True)
class EmbeddingParams(Generic[T]):
    w_s: T  # S x h
    w_proj: T  # h x d, shared by all F + 1 channels


@dataclass(frozen=True)
class GcnParams(Generic[T]):
    w_1: T  # d x d
    w_2: T  # d x d


@dataclass(frozen=True)
class HeadParams(Generic[T]):
    w_q: T  # d x d_a
    w_k: T
    w_v: T
    w_pred: T  # d_a x 1


def _map_group(group, fn: Callable[[str, T], U], prefix: str):
    return type(group)(**{f.name: fn(f"{prefix}.{f.name}", getattr(group, f.name)) for f in fields(group)})


@dataclass(frozen=True)
class MedFactParams(Generic[T]):
    """Every trainable parameter group"""

    channels: tuple[GruChannelParams[T], ...]
    embedding: EmbeddingParams[T]
    gcn: GcnParams[T]
    head: HeadParams[T]

    @property
    def n_dynamic(self) -> int:
        return len(self.channels)

    def map(self, fn: Callable[[str, T], U]) -> "MedFactParams[U]":
        """Apply fn(name, leaf) to every leaf, keeping the structure"""
        return MedFactParams(
            channels=tuple(_map_group(c, fn, f"gru.{i}") for i, c in enumerate(self.channels)),
            embedding=_map_group(self.embedding, fn, "embedding"),
            gcn=_map_group(self.gcn, fn, "gcn"),
            head=_map_group(self.head, fn, "head"),
        )

    def named(self) -> dict[str, T]:
        out: dict[str, T] = {}

        def collect(name: str, leaf: T) -> T:
            out[name] = leaf
            return leaf

        self.map(collect)
        return out

    def bind(self) -> "MedFactParams[ad.ComputeNode]":
        """Wrap every array in a named parameter node for one recorded pass"""
        return self.map(lambda name, value: ad.parameter(value, name))

    def replace_named(self, values: dict[str, np.ndarray]) -> "MedFactParams[np.ndarray]":
        """Rebuild with arrays looked up by name; every name must be present"""
        missing = set(self.named()) - set(values)
        if missing:
            raise ContractError("MedFactParams", "missing parameter arrays", missing=sorted(missing))
        return self.map(lambda name, _: np.array(values[name], dtype=np.float64))


def _uniform(rng: SeededRng, fan_in: int, shape: tuple[int, int]) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in) if fan_in > 0 else 0.0
    return rng.uniform(-bound, bound, shape)


def initialize_params(
    n_dynamic: int,
    n_static: int,
    rng: SeededRng,
    *,
    hidden_size: int,
    embed_dim: int,
    attention_dim: int,
) -> MedFactParams[np.ndarray]:
    """
    Uniform(-a, a) weights with a = 1/sqrt(fan_in); zero biases.

    Each parameter group draws from its own child stream, so adding a
    feature does not shift the draws of the groups after it.
    """
    h, d, d_a = hidden_size, embed_dim, attention_dim

    def channel(i: int) -> GruChannelParams[np.ndarray]:
        stream = rng.child(1, i)
        return GruChannelParams(
            w_z=_uniform(stream, 1, (1, h)),
            u_z=_uniform(stream, h, (h, h)),
            b_z=np.zeros((1, h)),
            w_r=_uniform(stream, 1, (1, h)),
            u_r=_uniform(stream, h, (h, h)),
            b_r=np.zeros((1, h)),
            w_h=_uniform(stream, 1, (1, h)),
            u_h=_uniform(stream, h, (h, h)),
            b_h=np.zeros((1, h)),
        )

    embed_stream, gcn_stream, head_stream = rng.child(2), rng.child(3), rng.child(4)
    return MedFactParams(
        channels=tuple(channel(i) for i in range(n_dynamic)),
        embedding=EmbeddingParams(
            w_s=_uniform(embed_stream, n_static, (n_static, h)),
            w_proj=_uniform(embed_stream, h, (h, d)),
        ),
        gcn=GcnParams(
            w_1=_uniform(gcn_stream, d, (d, d)),
            w_2=_uniform(gcn_stream, d, (d, d)),
        ),
        head=HeadParams(
            w_q=_uniform(head_stream, d, (d, d_a)),
            w_k=_uniform(head_stream, d, (d, d_a)),
            w_v=_uniform(head_stream, d, (d, d_a)),
            w_pred=_uniform(head_stream, d_a, (d_a, 1)),
        ),
    )
