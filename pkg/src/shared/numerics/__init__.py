from src.shared.numerics.eigen import symmetric_eigen
from src.shared.numerics.matrix import Matrix, as_matrix, matmul, relu, sigmoid, tanh
from src.shared.numerics.rng import SeededRng

__all__ = [
    "Matrix",
    "SeededRng",
    "as_matrix",
    "matmul",
    "relu",
    "sigmoid",
    "symmetric_eigen",
    "tanh",
]
