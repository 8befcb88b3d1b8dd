"""
Dense 64-bit matrix helpers.

A Matrix is a 2-D float64 numpy array. Helpers here validate shapes and
finiteness so that every public operation hands back finite values.
"""

from typing import TypeAlias

import numpy as np
import numpy.typing as npt

from src.domain.exceptions import ContractError, ShapeError

Matrix: TypeAlias = npt.NDArray[np.float64]


def as_matrix(value: npt.ArrayLike, *, name: str = "matrix") -> Matrix:
    """Coerce to a 2-D float64 array, rejecting other ranks and non-finite entries"""
    array = np.asarray(value, dtype=np.float64)
    if array.ndim == 1:
        array = array.reshape(1, -1)
    if array.ndim != 2:
        raise ContractError("as_matrix", f"{name} must be 2-D", shape=list(array.shape))
    return ensure_finite(array, name=name)


def ensure_finite(m: Matrix, *, name: str = "matrix") -> Matrix:
    if not np.all(np.isfinite(m)):
        raise ContractError("ensure_finite", f"{name} holds NaN or Inf entries")
    return m


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Standard matrix product; raises ShapeError naming both shapes"""
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError("matmul", a.shape, b.shape)
    return a @ b


def relu(m: Matrix) -> Matrix:
    return np.maximum(m, 0.0)


def tanh(m: Matrix) -> Matrix:
    return np.tanh(m)


def sigmoid(m: Matrix) -> Matrix:
    """Logistic function, evaluated without overflow for large |m|"""
    out = np.empty_like(m, dtype=np.float64)
    positive = m >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-m[positive]))
    exp_m = np.exp(m[~positive])
    out[~positive] = exp_m / (1.0 + exp_m)
    return out


def softmax_rows(m: Matrix) -> Matrix:
    shifted = m - m.max(axis=1, keepdims=True)
    exp_m = np.exp(shifted)
    return exp_m / exp_m.sum(axis=1, keepdims=True)


def require_same_shape(operation: str, a: Matrix, b: Matrix) -> None:
    if a.shape != b.shape:
        raise ShapeError(operation, a.shape, b.shape)
