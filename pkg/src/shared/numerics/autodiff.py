"""
Reverse-mode differentiation over a fixed operator vocabulary.

Every operator returns a ComputeNode that records its value, its parents
and a closure that pushes the node's gradient back to those parents.
`backward` walks the graph from a scalar root in reverse topological order.

Operators: matmul, add, mul (elementwise), scale, relu, tanh, sigmoid,
softmax_rows, concat_rows, slice_rows, reshape, transpose, sum,
l1_distance and bce_mean (mean binary cross-entropy on clamped
probabilities).
"""

from collections.abc import Callable, Sequence
from typing import TypeAlias

import numpy as np
import numpy.typing as npt

from src.domain.exceptions import ContractError, ShapeError
from src.shared.numerics import matrix as mx
from src.shared.numerics.matrix import Matrix

BackwardFn: TypeAlias = Callable[[Matrix], None]
GradientMap: TypeAlias = dict[str, Matrix]

BCE_EPSILON = 1e-12


class ComputeNode:
    """One value on the tape; `grad` is filled in by `backward`"""

    __slots__ = ("value", "op", "parents", "grad", "name", "requires_grad", "_backward")

    def __init__(
        self,
        value: Matrix,
        op: str,
        parents: Sequence["ComputeNode"] = (),
        backward: BackwardFn | None = None,
        name: str | None = None,
        requires_grad: bool | None = None,
    ):
        self.value = value
        self.op = op
        self.parents = tuple(parents)
        self.grad: Matrix | None = None
        self.name = name
        self.requires_grad = (
            any(p.requires_grad for p in self.parents) if requires_grad is None else requires_grad
        )
        self._backward = backward

    @property
    def shape(self) -> tuple[int, int]:
        return self.value.shape  # type: ignore[return-value]

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"ComputeNode({self.op}{label}, shape={self.shape})"


def _accumulate(node: ComputeNode, grad: Matrix) -> None:
    if not node.requires_grad:
        return
    if node.grad is None:
        node.grad = grad.copy()
    else:
        node.grad += grad


def parameter(value: npt.ArrayLike, name: str) -> ComputeNode:
    """A leaf whose gradient is reported by `backward`"""
    return ComputeNode(mx.as_matrix(value, name=name), "parameter", name=name, requires_grad=True)


def constant(value: npt.ArrayLike) -> ComputeNode:
    return ComputeNode(np.asarray(value, dtype=np.float64), "constant", requires_grad=False)


def matmul(a: ComputeNode, b: ComputeNode) -> ComputeNode:
    value = mx.matmul(a.value, b.value)

    def _backward(g: Matrix) -> None:
        if a.requires_grad:
            _accumulate(a, g @ b.value.T)
        if b.requires_grad:
            _accumulate(b, a.value.T @ g)

    return ComputeNode(value, "matmul", (a, b), _backward)


def add(a: ComputeNode, b: ComputeNode) -> ComputeNode:
    mx.require_same_shape("add", a.value, b.value)

    def _backward(g: Matrix) -> None:
        _accumulate(a, g)
        _accumulate(b, g)

    return ComputeNode(a.value + b.value, "add", (a, b), _backward)


def mul(a: ComputeNode, b: ComputeNode) -> ComputeNode:
    mx.require_same_shape("mul", a.value, b.value)

    def _backward(g: Matrix) -> None:
        if a.requires_grad:
            _accumulate(a, g * b.value)
        if b.requires_grad:
            _accumulate(b, g * a.value)

    return ComputeNode(a.value * b.value, "mul", (a, b), _backward)


def scale(a: ComputeNode, factor: float) -> ComputeNode:
    def _backward(g: Matrix) -> None:
        _accumulate(a, g * factor)

    return ComputeNode(a.value * factor, "scale", (a,), _backward)


def relu(a: ComputeNode) -> ComputeNode:
    value = mx.relu(a.value)

    def _backward(g: Matrix) -> None:
        _accumulate(a, g * (a.value > 0.0))

    return ComputeNode(value, "relu", (a,), _backward)


def tanh(a: ComputeNode) -> ComputeNode:
    value = mx.tanh(a.value)

    def _backward(g: Matrix) -> None:
        _accumulate(a, g * (1.0 - value * value))

    return ComputeNode(value, "tanh", (a,), _backward)


def sigmoid(a: ComputeNode) -> ComputeNode:
    value = mx.sigmoid(a.value)

    def _backward(g: Matrix) -> None:
        _accumulate(a, g * value * (1.0 - value))

    return ComputeNode(value, "sigmoid", (a,), _backward)


def softmax_rows(a: ComputeNode) -> ComputeNode:
    value = mx.softmax_rows(a.value)

    def _backward(g: Matrix) -> None:
        inner = np.sum(g * value, axis=1, keepdims=True)
        _accumulate(a, value * (g - inner))

    return ComputeNode(value, "softmax_rows", (a,), _backward)


def concat_rows(nodes: Sequence[ComputeNode]) -> ComputeNode:
    if not nodes:
        raise ContractError("concat_rows", "needs at least one node")
    cols = nodes[0].shape[1]
    for node in nodes[1:]:
        if node.shape[1] != cols:
            raise ShapeError("concat_rows", nodes[0].shape, node.shape)
    value = np.vstack([node.value for node in nodes])
    bounds = np.cumsum([0] + [node.shape[0] for node in nodes])

    def _backward(g: Matrix) -> None:
        for node, start, stop in zip(nodes, bounds[:-1], bounds[1:]):
            _accumulate(node, g[start:stop])

    return ComputeNode(value, "concat_rows", nodes, _backward)


def slice_rows(a: ComputeNode, start: int, stop: int) -> ComputeNode:
    if not 0 <= start < stop <= a.shape[0]:
        raise ContractError("slice_rows", f"rows [{start}, {stop}) outside [0, {a.shape[0]})")

    def _backward(g: Matrix) -> None:
        full = np.zeros_like(a.value)
        full[start:stop] = g
        _accumulate(a, full)

    return ComputeNode(a.value[start:stop], "slice_rows", (a,), _backward)


def reshape(a: ComputeNode, rows: int, cols: int) -> ComputeNode:
    """Row-major reshape"""
    if rows * cols != a.value.size:
        raise ShapeError("reshape", a.shape, (rows, cols))

    def _backward(g: Matrix) -> None:
        _accumulate(a, g.reshape(a.shape))

    return ComputeNode(a.value.reshape(rows, cols), "reshape", (a,), _backward)


def transpose(a: ComputeNode) -> ComputeNode:
    def _backward(g: Matrix) -> None:
        _accumulate(a, g.T)

    return ComputeNode(a.value.T, "transpose", (a,), _backward)


def sum(a: ComputeNode) -> ComputeNode:  # noqa: A001
    def _backward(g: Matrix) -> None:
        _accumulate(a, np.full(a.shape, g[0, 0]))

    return ComputeNode(np.array([[a.value.sum()]]), "sum", (a,), _backward)


def l1_distance(a: ComputeNode, b: ComputeNode) -> ComputeNode:
    """Scalar ||a - b||_1; the subgradient at ties is 0"""
    mx.require_same_shape("l1_distance", a.value, b.value)
    diff = a.value - b.value

    def _backward(g: Matrix) -> None:
        direction = np.sign(diff) * g[0, 0]
        _accumulate(a, direction)
        _accumulate(b, -direction)

    return ComputeNode(np.array([[np.abs(diff).sum()]]), "l1_distance", (a, b), _backward)


def bce_mean(probabilities: ComputeNode, labels: npt.ArrayLike) -> ComputeNode:
    """Mean of -y ln p - (1 - y) ln(1 - p) with p clamped to [1e-12, 1 - 1e-12]"""
    y = np.asarray(labels, dtype=np.float64).reshape(probabilities.shape)
    p = np.clip(probabilities.value, BCE_EPSILON, 1.0 - BCE_EPSILON)
    losses = -y * np.log(p) - (1.0 - y) * np.log1p(-p)
    inside = (probabilities.value > BCE_EPSILON) & (probabilities.value < 1.0 - BCE_EPSILON)
    count = y.size

    def _backward(g: Matrix) -> None:
        local = (p - y) / (p * (1.0 - p)) / count
        _accumulate(probabilities, g[0, 0] * local * inside)

    return ComputeNode(np.array([[losses.mean()]]), "bce_mean", (probabilities,), _backward)


def _topological_order(root: ComputeNode) -> list[ComputeNode]:
    order: list[ComputeNode] = []
    visited: set[int] = set()
    stack: list[tuple[ComputeNode, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited or not node.requires_grad:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for parent in node.parents:
            if id(parent) not in visited and parent.requires_grad:
                stack.append((parent, False))
    return order


def backward(root: ComputeNode) -> GradientMap:
    """
    Accumulate d(root)/d(node) into every reachable node's `grad`.

    Returns:
        Gradients of the named parameter leaves, keyed by name

    Raises:
        ContractError: If root is not a 1x1 scalar
    """
    if root.shape != (1, 1):
        raise ContractError("backward", "root must be a 1x1 scalar", shape=list(root.shape))

    order = _topological_order(root)
    for node in order:
        node.grad = None
    root.grad = np.ones((1, 1))

    gradients: GradientMap = {}
    for node in reversed(order):
        if node.grad is None:
            continue
        if node._backward is not None:
            node._backward(node.grad)
        if node.op == "parameter" and node.name is not None:
            gradients[node.name] = mx.ensure_finite(node.grad, name=f"grad({node.name})")
    return gradients
