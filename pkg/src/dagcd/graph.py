"""Directed graphs with cycle queries, and the undirected candidate-edge set.

The solver keeps a ``DirectedGraph`` synchronized with the off-diagonal
support of its factor matrix and asks, before writing a nonzero, whether the
corresponding edge would close a directed cycle.  ``Superstructure`` is the
undirected set of node pairs the solver is allowed to orient at all.

Edge-list file format (shared by graphs and superstructures): one ``u v``
pair per line, 0-indexed, ``#`` starts a comment.  Writers emit a
``# nodes: m`` comment so readers can recover the node count.
"""

from __future__ import annotations

from bisect import insort
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator


class DirectedGraph:
    """Mutable directed graph on nodes 0..num_nodes-1, no self-loops."""

    def __init__(self, num_nodes: int, edges: Iterable[tuple[int, int]] = ()):
        if num_nodes <= 0:
            raise ValueError(f"num_nodes must be positive, got {num_nodes}")
        self.num_nodes = num_nodes
        self._succ: list[list[int]] = [[] for _ in range(num_nodes)]
        self._succ_sets: list[set[int]] = [set() for _ in range(num_nodes)]
        for u, v in edges:
            self.add_edge(u, v)

    def _check_node(self, u: int) -> None:
        if not 0 <= u < self.num_nodes:
            raise IndexError(f"node {u} out of range for {self.num_nodes} nodes")

    def successors(self, u: int) -> list[int]:
        self._check_node(u)
        return list(self._succ[u])

    def has_edge(self, u: int, v: int) -> bool:
        self._check_node(u)
        self._check_node(v)
        return v in self._succ_sets[u]

    def add_edge(self, u: int, v: int) -> None:
        """Insert edge u -> v; a no-op if already present."""
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise ValueError(f"self-loop {u} -> {v} not allowed")
        if v not in self._succ_sets[u]:
            self._succ_sets[u].add(v)
            insort(self._succ[u], v)

    def remove_edge(self, u: int, v: int) -> None:
        """Remove edge u -> v; a no-op if absent."""
        self._check_node(u)
        self._check_node(v)
        if v in self._succ_sets[u]:
            self._succ_sets[u].remove(v)
            self._succ[u].remove(v)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.num_nodes) for v in self._succ[u]]

    def num_edges(self) -> int:
        return sum(len(s) for s in self._succ)

    def parents(self, v: int) -> list[int]:
        self._check_node(v)
        return [u for u in range(self.num_nodes) if v in self._succ_sets[u]]

    def would_create_cycle(self, u: int, v: int) -> bool:
        """Whether adding u -> v would close a directed cycle.

        True iff u is already reachable from v; checked by breadth-first
        search from v over the current edges.  The edge u -> v itself must
        not be present.
        """
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise ValueError("cycle query on a self-loop")
        seen = [False] * self.num_nodes
        seen[v] = True
        queue = deque([v])
        while queue:
            w = queue.popleft()
            for x in self._succ[w]:
                if x == u:
                    return True
                if not seen[x]:
                    seen[x] = True
                    queue.append(x)
        return False

    def topological_order(self) -> list[int] | None:
        """Kahn's algorithm; returns None when the graph has a cycle."""
        indegree = [0] * self.num_nodes
        for u in range(self.num_nodes):
            for v in self._succ[u]:
                indegree[v] += 1
        ready = deque(u for u in range(self.num_nodes) if indegree[u] == 0)
        order: list[int] = []
        while ready:
            u = ready.popleft()
            order.append(u)
            for v in self._succ[u]:
                indegree[v] -= 1
                if indegree[v] == 0:
                    ready.append(v)
        return order if len(order) == self.num_nodes else None

    def is_dag(self) -> bool:
        return self.topological_order() is not None

    def copy(self) -> "DirectedGraph":
        return DirectedGraph(self.num_nodes, self.edges())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self.num_nodes == other.num_nodes and self._succ == other._succ

    def __repr__(self) -> str:
        return f"DirectedGraph(num_nodes={self.num_nodes}, edges={self.edges()})"


def normalize_pair(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise ValueError(f"self-pair ({u}, {v}) not allowed")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Superstructure:
    """Undirected set of candidate edges, stored as (lo, hi) pairs."""

    num_nodes: int
    pairs: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.num_nodes <= 0:
            raise ValueError(f"num_nodes must be positive, got {self.num_nodes}")
        for u, v in self.pairs:
            if not (0 <= u < v < self.num_nodes):
                raise ValueError(f"invalid pair ({u}, {v}) on {self.num_nodes} nodes")

    @classmethod
    def from_edges(cls, num_nodes: int, edges: Iterable[tuple[int, int]]) -> "Superstructure":
        return cls(num_nodes, frozenset(normalize_pair(u, v) for u, v in edges))

    def __contains__(self, pair: tuple[int, int]) -> bool:
        return normalize_pair(*pair) in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.pairs))

    def neighbors(self, u: int) -> list[int]:
        """Superstructure neighbors of u, ascending."""
        if not 0 <= u < self.num_nodes:
            raise IndexError(f"node {u} out of range for {self.num_nodes} nodes")
        out = []
        for a, b in self.pairs:
            if a == u:
                out.append(b)
            elif b == u:
                out.append(a)
        return sorted(out)

    def neighbor_lists(self) -> list[list[int]]:
        """Per-node ascending neighbor lists, built in one pass."""
        lists: list[list[int]] = [[] for _ in range(self.num_nodes)]
        for a, b in self.pairs:
            lists[a].append(b)
            lists[b].append(a)
        for entry in lists:
            entry.sort()
        return lists


def write_edge_list(path: str | Path, num_nodes: int, edges: Iterable[tuple[int, int]]) -> None:
    lines = [f"# nodes: {num_nodes}"]
    lines += [f"{u} {v}" for u, v in sorted(edges)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path: str | Path) -> tuple[int | None, list[tuple[int, int]]]:
    """Parse an edge-list file; returns (node count or None, edge pairs)."""
    num_nodes: int | None = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.startswith("nodes:"):
                num_nodes = int(body.split(":", 1)[1])
            continue
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'u v', got {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return num_nodes, edges
