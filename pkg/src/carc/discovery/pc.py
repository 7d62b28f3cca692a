"""PC algorithm over discrete data: skeleton search, v-structures and Meek rules.

Variables are the data columns, visited in index order. Edge removal is
immediate (later tests at the same level see the reduced adjacencies), so
results depend on column order; callers flatten grids row-major with input
cells first.
"""

import logging
from collections.abc import Iterator
from itertools import combinations

import numpy as np
from pydantic import BaseModel, ConfigDict

from carc.config import settings
from carc.discovery.citest import DiscreteData, chi_square_ci
from carc.discovery.graph import CausalGraph
from carc.errors import ContractError

logger = logging.getLogger(__name__)

Pair = tuple[int, int]


def _conditioning_sets(
    adj: list[set[int]], i: int, j: int, level: int
) -> Iterator[tuple[int, ...]]:
    if level == 0:
        yield ()
        return
    seen: set[tuple[int, ...]] = set()
    for side, other in ((i, j), (j, i)):
        for cond in combinations(sorted(adj[side] - {other}), level):
            if cond not in seen:
                seen.add(cond)
                yield cond


class Skeleton(BaseModel):
    """Undirected skeleton and the separating set recorded for each removed edge."""

    model_config = ConfigDict(frozen=True)

    graph: CausalGraph
    sepsets: dict[Pair, tuple[int, ...]]
    n_tests: int = 0

    def sepset(self, i: int, j: int) -> tuple[int, ...] | None:
        return self.sepsets.get((min(i, j), max(i, j)))


class Orientation(BaseModel):
    """CPDAG produced by :func:`pc_orient`.

    ``conflicts`` lists v-structures ``(i, k, j)`` that disagreed with an
    orientation made earlier; the earlier orientation is kept.
    """

    model_config = ConfigDict(frozen=True)

    graph: CausalGraph
    conflicts: list[tuple[int, int, int]]


def pc_skeleton(
    data: np.ndarray | DiscreteData,
    alpha: float | None = None,
    max_cond: int | None = None,
    min_stratum: int | None = None,
) -> Skeleton:
    """Skeleton phase of PC.

    Starting from the complete graph, level ``l = 0..max_cond`` visits pairs
    ``i < j`` in lexicographic order and tries conditioning sets of size ``l``
    drawn from the sorted neighbours of ``i`` (then of ``j``), removing the
    edge at the first independence.
    """
    alpha = settings.discovery.alpha if alpha is None else alpha
    max_cond = settings.discovery.max_cond if max_cond is None else max_cond
    if max_cond < 0:
        raise ContractError(f"max_cond must be >= 0, got {max_cond}")
    coded = data if isinstance(data, DiscreteData) else DiscreteData(data)

    n = coded.n_vars
    adj = [set(range(n)) - {v} for v in range(n)]
    sepsets: dict[Pair, tuple[int, ...]] = {}
    n_tests = 0

    for level in range(max_cond + 1):
        if all(len(a) - 1 < level for a in adj):
            break
        removed = 0
        for i in range(n):
            for j in sorted(adj[i]):
                if j <= i or j not in adj[i]:
                    continue
                found = None
                for cond in _conditioning_sets(adj, i, j, level):
                    n_tests += 1
                    result = chi_square_ci(coded, i, j, cond, alpha=alpha, min_stratum=min_stratum)
                    if result.independent:
                        found = cond
                        break
                if found is not None:
                    adj[i].discard(j)
                    adj[j].discard(i)
                    sepsets[(i, j)] = found
                    removed += 1
        logger.debug(f"PC level {level}: removed {removed} edges, {n_tests} tests so far")

    edges = frozenset((i, j) for i in range(n) for j in adj[i] if i < j)
    return Skeleton(graph=CausalGraph(n=n, undirected=edges), sepsets=sepsets, n_tests=n_tests)


class _Marks:
    """Working PDAG: adjacency plus arrowheads, ``arrow[a, b]`` meaning a -> b."""

    def __init__(self, graph: CausalGraph) -> None:
        self.n = graph.n
        self.adj = graph.adjacency_matrix().astype(bool)
        self.arrow = np.zeros((self.n, self.n), dtype=bool)
        for a, b in graph.directed:
            self.arrow[a, b] = True

    def undirected(self, a: int, b: int) -> bool:
        return bool(self.adj[a, b] and not self.arrow[a, b] and not self.arrow[b, a])

    def directed(self, a: int, b: int) -> bool:
        return bool(self.arrow[a, b])

    def orient(self, a: int, b: int) -> bool:
        if not self.undirected(a, b):
            return False
        self.arrow[a, b] = True
        return True

    def neighbours(self, a: int) -> list[int]:
        return [int(b) for b in np.flatnonzero(self.adj[a])]

    def to_graph(self) -> CausalGraph:
        directed = set()
        undirected = set()
        for a, b in zip(*np.nonzero(np.triu(self.adj, 1)), strict=True):
            a, b = int(a), int(b)
            if self.arrow[a, b]:
                directed.add((a, b))
            elif self.arrow[b, a]:
                directed.add((b, a))
            else:
                undirected.add((a, b))
        return CausalGraph(n=self.n, directed=frozenset(directed), undirected=frozenset(undirected))


def _rule1(m: _Marks) -> bool:
    """a -> b - c, a and c not adjacent: b -> c."""
    changed = False
    for b in range(m.n):
        for a in m.neighbours(b):
            if not m.directed(a, b):
                continue
            for c in m.neighbours(b):
                if c != a and m.undirected(b, c) and not m.adj[a, c]:
                    changed |= m.orient(b, c)
    return changed


def _rule2(m: _Marks) -> bool:
    """a -> b -> c and a - c: a -> c."""
    changed = False
    for a in range(m.n):
        for c in m.neighbours(a):
            if not m.undirected(a, c):
                continue
            if any(m.directed(a, b) and m.directed(b, c) for b in m.neighbours(a)):
                changed |= m.orient(a, c)
    return changed


def _rule3(m: _Marks) -> bool:
    """a - b -> d, a - c -> d, a - d, b and c not adjacent: a -> d."""
    changed = False
    for a in range(m.n):
        for d in m.neighbours(a):
            if not m.undirected(a, d):
                continue
            sources = [b for b in m.neighbours(a) if m.undirected(a, b) and m.directed(b, d)]
            if any(not m.adj[b, c] for b, c in combinations(sources, 2)):
                changed |= m.orient(a, d)
    return changed


def _rule4(m: _Marks) -> bool:
    """a - c -> d -> b, a - b, a adjacent to d, c and b not adjacent: a -> b."""
    changed = False
    for a in range(m.n):
        for b in m.neighbours(a):
            if not m.undirected(a, b):
                continue
            for d in m.neighbours(a):
                if d == b or not m.directed(d, b):
                    continue
                if any(
                    c not in (b, d) and m.undirected(a, c) and m.directed(c, d) and not m.adj[c, b]
                    for c in m.neighbours(a)
                ):
                    changed |= m.orient(a, b)
                    break
    return changed


def meek_closure(graph: CausalGraph) -> CausalGraph:
    """Apply Meek rules 1-4 in order until none fires."""
    m = _Marks(graph)
    rounds = 0
    while _rule1(m) | _rule2(m) | _rule3(m) | _rule4(m):
        rounds += 1
    logger.debug(f"Meek rules reached closure after {rounds} rounds")
    return m.to_graph()


def pc_orient(skeleton: Skeleton) -> Orientation:
    """Orient v-structures ``i -> k <- j`` (k not in sepset(i, j)), then apply Meek rules.

    Colliders are visited by ``k``, then by pairs ``i < j``; an orientation
    contradicting an earlier one is recorded in ``conflicts`` and skipped.
    """
    m = _Marks(skeleton.graph)
    conflicts: list[tuple[int, int, int]] = []

    for k in range(m.n):
        for i, j in combinations(m.neighbours(k), 2):
            if m.adj[i, j]:
                continue
            sepset = skeleton.sepset(i, j)
            if sepset is None or k in sepset:
                continue
            if m.directed(k, i) or m.directed(k, j):
                conflicts.append((i, k, j))
                continue
            m.arrow[i, k] = True
            m.arrow[j, k] = True

    if conflicts:
        logger.debug(f"{len(conflicts)} conflicting v-structures kept their first orientation")
    oriented = m.to_graph()
    return Orientation(graph=meek_closure(oriented), conflicts=conflicts)


def pc(
    data: np.ndarray | DiscreteData,
    alpha: float | None = None,
    max_cond: int | None = None,
    min_stratum: int | None = None,
) -> Orientation:
    """Full PC: skeleton then orientation."""
    return pc_orient(pc_skeleton(data, alpha=alpha, max_cond=max_cond, min_stratum=min_stratum))
