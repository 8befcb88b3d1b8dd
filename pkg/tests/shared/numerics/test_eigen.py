import numpy as np
import pytest

from src.domain.exceptions import ContractError
from src.shared.numerics.eigen import symmetric_eigen

RESIDUAL_TOL = 1e-8


def _assert_valid_pairs(m: np.ndarray, values: np.ndarray, vectors: np.ndarray) -> None:
    for j, value in enumerate(values):
        residual = m @ vectors[:, j] - value * vectors[:, j]
        assert np.max(np.abs(residual)) <= RESIDUAL_TOL
    assert np.allclose(vectors.T @ vectors, np.eye(values.size), atol=RESIDUAL_TOL)


class TestSymmetricEigen:
    """Unit tests for the Jacobi eigensolver."""

    def test_diagonal_matrix(self):
        values, vectors = symmetric_eigen(np.diag([3.0, 1.0, 2.0]), 2)
        assert np.allclose(values, [1.0, 2.0])
        assert np.allclose(np.abs(vectors[:, 0]), [0.0, 1.0, 0.0])

    def test_two_by_two_by_hand(self):
        values, vectors = symmetric_eigen(np.array([[2.0, 1.0], [1.0, 2.0]]), 2)
        assert np.allclose(values, [1.0, 3.0], atol=1e-12)
        _assert_valid_pairs(np.array([[2.0, 1.0], [1.0, 2.0]]), values, vectors)

    @pytest.mark.parametrize("seed", range(5))
    def test_random_symmetric_residuals(self, seed):
        """
        GIVEN a random symmetric 8x8 matrix
        WHEN all eigenpairs are requested
        THEN they are ascending, orthonormal and satisfy |Mv - lv| <= 1e-8.
        """
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(8, 8))
        m = (a + a.T) / 2

        values, vectors = symmetric_eigen(m, 8)

        assert np.all(np.diff(values) >= 0)
        assert np.allclose(values, np.linalg.eigvalsh(m), atol=1e-9)
        _assert_valid_pairs(m, values, vectors)

    def test_rejects_asymmetric_input(self):
        with pytest.raises(ContractError):
            symmetric_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]), 1)

    def test_rejects_k_above_size(self):
        with pytest.raises(ContractError):
            symmetric_eigen(np.eye(2), 3)
