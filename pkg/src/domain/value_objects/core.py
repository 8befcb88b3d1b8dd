"""
Domain value objects for the MedFACT model.

Value objects are immutable and validate their invariants at construction.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from src.domain.exceptions import ContractError
from src.shared.numerics.matrix import Matrix, as_matrix

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """
    Cohort-wise kernel correlations between dynamic features

    Invariants: square, symmetric, unit diagonal, 0 < r_ij <= 1.
    """

    values: Matrix

    def __post_init__(self) -> None:
        r = as_matrix(self.values, name="R")
        object.__setattr__(self, "values", r)
        if r.shape[0] != r.shape[1]:
            raise ContractError("CorrelationMatrix", "R must be square", shape=list(r.shape))
        if np.max(np.abs(r - r.T), initial=0.0) > SYMMETRY_TOL:
            raise ContractError("CorrelationMatrix", "R must be symmetric")
        if not np.all(np.diag(r) == 1.0):
            raise ContractError("CorrelationMatrix", "R must have a unit diagonal")
        if np.any(r <= 0.0) or np.any(r > 1.0):
            raise ContractError("CorrelationMatrix", "entries must lie in (0, 1]")

    @property
    def n_features(self) -> int:
        return self.values.shape[0]

    @classmethod
    def ones(cls, n_features: int) -> "CorrelationMatrix":
        """The all-ones matrix training starts from"""
        return cls(np.ones((n_features, n_features)))


@dataclass(frozen=True)
class ClusterAssignment:
    """
    Partition of dynamic feature indices 0..F-1 into K non-empty groups

    Groups are stored canonically: members ascending, groups ordered by
    their smallest member, so equal partitions compare equal.
    """

    groups: tuple[tuple[int, ...], ...]
    n_features: int

    def __post_init__(self) -> None:
        canonical = tuple(sorted((tuple(sorted(g)) for g in self.groups), key=lambda g: g[0] if g else -1))
        object.__setattr__(self, "groups", canonical)

        if any(len(g) == 0 for g in canonical):
            raise ContractError("ClusterAssignment", "groups must be non-empty")
        members = [i for g in canonical for i in g]
        if sorted(members) != list(range(self.n_features)):
            raise ContractError(
                "ClusterAssignment",
                "groups must partition the feature indices",
                n_features=self.n_features,
            )

    @property
    def k(self) -> int:
        return len(self.groups)

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "ClusterAssignment":
        buckets: dict[int, list[int]] = {}
        for index, label in enumerate(labels):
            buckets.setdefault(int(label), []).append(index)
        return cls(tuple(tuple(g) for g in buckets.values()), len(labels))

    def labels(self) -> np.ndarray:
        """Group index of every feature, following the canonical group order"""
        out = np.empty(self.n_features, dtype=np.int64)
        for group_index, group in enumerate(self.groups):
            out[list(group)] = group_index
        return out

    def named_groups(self, names: Sequence[str]) -> list[list[str]]:
        return [[names[i] for i in group] for group in self.groups]


@dataclass(frozen=True, eq=False)
class CorrelationGraph:
    """
    Weighted adjacency over F dynamic nodes plus the static node (index F)

    Invariants: symmetric, entries in [0, 1], unit diagonal, unit edges
    between the static node and every dynamic node.
    """

    adjacency: Matrix

    def __post_init__(self) -> None:
        a = as_matrix(self.adjacency, name="A")
        object.__setattr__(self, "adjacency", a)
        if a.shape[0] != a.shape[1] or a.shape[0] < 2:
            raise ContractError("CorrelationGraph", "A must be square with a static node", shape=list(a.shape))
        if np.max(np.abs(a - a.T)) > SYMMETRY_TOL:
            raise ContractError("CorrelationGraph", "A must be symmetric")
        if np.any(a < 0.0) or np.any(a > 1.0):
            raise ContractError("CorrelationGraph", "entries must lie in [0, 1]")
        if not np.all(np.diag(a) == 1.0) or not np.all(a[-1] == 1.0):
            raise ContractError("CorrelationGraph", "self-loops and static edges must be 1")

    @property
    def n_nodes(self) -> int:
        return self.adjacency.shape[0]

    @property
    def static_index(self) -> int:
        return self.n_nodes - 1

    def neighbors(self, node: int) -> set[int]:
        return {int(j) for j in np.flatnonzero(self.adjacency[node])}
