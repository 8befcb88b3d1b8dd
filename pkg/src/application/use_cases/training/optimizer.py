"""
Adam optimizer over named parameter arrays.

    m_t = b1 m_{t-1} + (1 - b1) g
    v_t = b2 v_{t-1} + (1 - b2) g^2
    p_t = p_{t-1} - lr m_hat / (sqrt(v_hat) + eps)

with bias-corrected m_hat = m_t / (1 - b1^t), v_hat = v_t / (1 - b2^t).
"""

from dataclasses import dataclass

import numpy as np

from src.domain.exceptions import ShapeError

BETA_1 = 0.9
BETA_2 = 0.999
EPSILON = 1e-8


@dataclass(frozen=True, eq=False)
class AdamState:
    step: int
    first_moment: dict[str, np.ndarray]
    second_moment: dict[str, np.ndarray]

    @classmethod
    def initial(cls, params: dict[str, np.ndarray]) -> "AdamState":
        return cls(
            step=0,
            first_moment={name: np.zeros_like(p) for name, p in params.items()},
            second_moment={name: np.zeros_like(p) for name, p in params.items()},
        )


def adam_step(
    params: dict[str, np.ndarray],
    grads: dict[str, np.ndarray],
    state: AdamState,
    lr: float,
) -> tuple[dict[str, np.ndarray], AdamState]:
    """
    One Adam update. Parameters without a gradient entry see a zero gradient.

    Raises:
        ShapeError: If a gradient's shape differs from its parameter's
    """
    step = state.step + 1
    correction_1 = 1.0 - BETA_1**step
    correction_2 = 1.0 - BETA_2**step

    updated: dict[str, np.ndarray] = {}
    first: dict[str, np.ndarray] = {}
    second: dict[str, np.ndarray] = {}
    for name, value in params.items():
        g = grads.get(name)
        if g is None:
            g = np.zeros_like(value)
        elif g.shape != value.shape:
            raise ShapeError(f"adam_step[{name}]", value.shape, g.shape)
        m = BETA_1 * state.first_moment[name] + (1.0 - BETA_1) * g
        v = BETA_2 * state.second_moment[name] + (1.0 - BETA_2) * g * g
        updated[name] = value - lr * (m / correction_1) / (np.sqrt(v / correction_2) + EPSILON)
        first[name] = m
        second[name] = v
    return updated, AdamState(step=step, first_moment=first, second_moment=second)
