"""Causal graph value type and structural Hamming distance."""

from enum import IntEnum
from typing import Self

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from carc.errors import ContractError


class EdgeStatus(IntEnum):
    """Status of the pair (i, j), i < j."""

    NONE = 0
    FORWARD = 1  # i -> j
    BACKWARD = 2  # j -> i
    UNDIRECTED = 3


class CausalGraph(BaseModel):
    """A mixed graph over ``n`` variables with directed and undirected edges.

    Directed edges are ``(tail, head)``; undirected edges are stored as
    ``(i, j)`` with ``i < j``.
    """

    model_config = ConfigDict(frozen=True)

    n: int
    directed: frozenset[tuple[int, int]] = frozenset()
    undirected: frozenset[tuple[int, int]] = frozenset()

    @field_validator("undirected")
    @classmethod
    def _normalize_undirected(cls, v: frozenset[tuple[int, int]]) -> frozenset[tuple[int, int]]:
        return frozenset((min(i, j), max(i, j)) for i, j in v)

    @model_validator(mode="after")
    def _check_edges(self) -> Self:
        seen: set[tuple[int, int]] = set()
        for i, j in list(self.directed) + list(self.undirected):
            if i == j:
                raise ValueError(f"self-loop on variable {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) outside 0..{self.n - 1}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"pair {key} has more than one edge")
            seen.add(key)
        return self

    @classmethod
    def empty(cls, n: int) -> "CausalGraph":
        return cls(n=n)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "CausalGraph":
        """Build from an n x n 0/1 matrix where m[i,j]=1 marks a mark i -> j.

        A pair with both marks set is undirected.
        """
        m = np.asarray(matrix) != 0
        n = m.shape[0]
        directed = set()
        undirected = set()
        for i, j in zip(*np.nonzero(m), strict=True):
            i, j = int(i), int(j)
            if m[j, i]:
                if i < j:
                    undirected.add((i, j))
            else:
                directed.add((i, j))
        return cls(n=n, directed=frozenset(directed), undirected=frozenset(undirected))

    def adjacency_matrix(self) -> np.ndarray:
        """Row-major 0/1 matrix; undirected edges set both entries."""
        m = np.zeros((self.n, self.n), dtype=np.int8)
        for i, j in self.directed:
            m[i, j] = 1
        for i, j in self.undirected:
            m[i, j] = 1
            m[j, i] = 1
        return m

    def status(self, i: int, j: int) -> EdgeStatus:
        """Edge status of the pair (i, j) relative to ``i < j`` ordering."""
        a, b = min(i, j), max(i, j)
        if (a, b) in self.undirected:
            return EdgeStatus.UNDIRECTED
        if (a, b) in self.directed:
            return EdgeStatus.FORWARD
        if (b, a) in self.directed:
            return EdgeStatus.BACKWARD
        return EdgeStatus.NONE

    def pair_statuses(self) -> dict[tuple[int, int], EdgeStatus]:
        """All non-empty pair statuses keyed by ``(i, j)`` with ``i < j``."""
        out = {(i, j): EdgeStatus.UNDIRECTED for i, j in self.undirected}
        for i, j in self.directed:
            out[(min(i, j), max(i, j))] = EdgeStatus.FORWARD if i < j else EdgeStatus.BACKWARD
        return out

    def parents(self, j: int) -> list[int]:
        return sorted(i for i, h in self.directed if h == j)

    @property
    def n_edges(self) -> int:
        return len(self.directed) + len(self.undirected)

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.directed)
        return g

    def is_dag(self) -> bool:
        """True when there are no undirected edges and the directed part is acyclic."""
        return not self.undirected and nx.is_directed_acyclic_graph(self.to_networkx())


def shd(pred: CausalGraph, truth: CausalGraph) -> int:
    """Structural Hamming distance between two graphs.

    Counts pairs whose edge status differs: missing and extra edges count 1,
    as does a reversed edge or an undirected edge over a directed one.
    """
    if pred.n != truth.n:
        raise ContractError(f"graph sizes differ: {pred.n} vs {truth.n}")

    a = pred.pair_statuses()
    b = truth.pair_statuses()
    return sum(1 for key in a.keys() | b.keys() if a.get(key) != b.get(key))
