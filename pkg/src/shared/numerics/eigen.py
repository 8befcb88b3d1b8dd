"""
Symmetric eigensolver using cyclic Jacobi rotations.

Each sweep visits every off-diagonal pair (p, q) in row order and applies
the rotation that annihilates a[p, q]. Sweeps stop once the off-diagonal
Frobenius norm is at most 1e-12 (relative to the matrix norm when that
exceeds one) or after 100 sweeps.
"""

import numpy as np
import numpy.typing as npt

from src.domain.exceptions import ContractError
from src.shared.numerics.matrix import Matrix, as_matrix
from src.shared.telemetry.logging import get_logger

logger = get_logger(__name__)

SYMMETRY_TOL = 1e-10
OFF_DIAGONAL_TOL = 1e-12
MAX_SWEEPS = 100


def _off_diagonal_norm(a: Matrix) -> float:
    return float(np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0)))


def _rotate(a: Matrix, v: Matrix, p: int, q: int) -> None:
    apq = a[p, q]
    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
    if theta == 0.0:
        t = 1.0
    else:
        t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c

    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q

    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q
    a[p, q] = a[q, p] = 0.0

    vec_p = v[:, p].copy()
    vec_q = v[:, q].copy()
    v[:, p] = c * vec_p - s * vec_q
    v[:, q] = s * vec_p + c * vec_q


def symmetric_eigen(m: npt.ArrayLike, k: int) -> tuple[npt.NDArray[np.float64], Matrix]:
    """
    Return the k smallest eigenvalues (ascending) and their orthonormal eigenvectors.

    Args:
        m: Square symmetric matrix (asymmetry above 1e-10 is rejected)
        k: Number of eigenpairs, 0 <= k <= rows

    Returns:
        (eigenvalues, vectors) where vectors[:, j] pairs with eigenvalues[j]

    Raises:
        ContractError: If m is not square, not symmetric, or k is out of range
    """
    a = as_matrix(m, name="m").copy()
    n, cols = a.shape
    if n != cols:
        raise ContractError("symmetric_eigen", "matrix must be square", shape=[n, cols])
    asymmetry = float(np.max(np.abs(a - a.T))) if n else 0.0
    if asymmetry > SYMMETRY_TOL:
        raise ContractError("symmetric_eigen", "matrix is not symmetric", asymmetry=asymmetry)
    if not 0 <= k <= n:
        raise ContractError("symmetric_eigen", f"k={k} outside [0, {n}]")

    a = 0.5 * (a + a.T)
    v = np.eye(n)
    tolerance = OFF_DIAGONAL_TOL * max(1.0, float(np.linalg.norm(a)))

    sweeps = 0
    while sweeps < MAX_SWEEPS and _off_diagonal_norm(a) > tolerance:
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] != 0.0:
                    _rotate(a, v, p, q)
        sweeps += 1

    if sweeps == MAX_SWEEPS:
        logger.warning(
            "Jacobi stopped after %d sweeps with off-diagonal norm %.3e",
            sweeps,
            _off_diagonal_norm(a),
        )

    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues, kind="stable")[:k]
    vectors = v[:, order]

    # Fix each vector's sign so its largest-magnitude component is positive.
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return eigenvalues[order], vectors * signs
