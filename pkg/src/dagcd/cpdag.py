"""Markov equivalence classes: DAG -> CPDAG conversion and edit distance.

Two DAGs are observationally indistinguishable iff they share a skeleton and
the same v-structures (colliders i -> k <- j with i, j non-adjacent).  The
CPDAG canonically represents the class: compelled edges stay directed,
reversible ones become undirected.  We build it by orienting the v-structure
edges in the skeleton and closing under the four Meek orientation rules.

A CPDAG is stored as an m x m 0/1 matrix: directed i -> j has entry (i, j)
set and (j, i) clear; an undirected edge sets both.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .graph import DirectedGraph


def skeleton_and_vstructures(
    g: DirectedGraph,
) -> tuple[frozenset[tuple[int, int]], frozenset[tuple[int, int, int]]]:
    """Skeleton pairs (lo, hi) and v-structure triples (i, j, k), i < j."""
    if not g.is_dag():
        raise ValueError("input graph must be a DAG")
    skeleton = frozenset(
        (u, v) if u < v else (v, u) for u, v in g.edges()
    )
    triples = set()
    for k in range(g.num_nodes):
        parents = g.parents(k)
        for a in range(len(parents)):
            for b in range(a + 1, len(parents)):
                i, j = sorted((parents[a], parents[b]))
                if (i, j) not in skeleton:
                    triples.add((i, j, k))
    return skeleton, frozenset(triples)


def _undirected(adj: np.ndarray, i: int, j: int) -> bool:
    return bool(adj[i, j] and adj[j, i])


def _directed(adj: np.ndarray, i: int, j: int) -> bool:
    return bool(adj[i, j] and not adj[j, i])


def _adjacent(adj: np.ndarray, i: int, j: int) -> bool:
    return bool(adj[i, j] or adj[j, i])


def _rule1(adj: np.ndarray) -> bool:
    # a -> b and b - c with a, c non-adjacent: orient b -> c.
    m = adj.shape[0]
    changed = False
    for b in range(m):
        for c in range(m):
            if b == c or not _undirected(adj, b, c):
                continue
            for a in range(m):
                if a in (b, c):
                    continue
                if _directed(adj, a, b) and not _adjacent(adj, a, c):
                    adj[c, b] = 0
                    changed = True
                    break
    return changed


def _rule2(adj: np.ndarray) -> bool:
    # a -> b -> c with a - c: orient a -> c.
    m = adj.shape[0]
    changed = False
    for a in range(m):
        for c in range(m):
            if a == c or not _undirected(adj, a, c):
                continue
            for b in range(m):
                if b in (a, c):
                    continue
                if _directed(adj, a, b) and _directed(adj, b, c):
                    adj[c, a] = 0
                    changed = True
                    break
    return changed


def _rule3(adj: np.ndarray) -> bool:
    # a - b with two chains a - c -> b and a - d -> b, c, d non-adjacent:
    # orient a -> b.
    m = adj.shape[0]
    changed = False
    for a in range(m):
        for b in range(m):
            if a == b or not _undirected(adj, a, b):
                continue
            pointers = [
                c
                for c in range(m)
                if c not in (a, b)
                and _undirected(adj, a, c)
                and _directed(adj, c, b)
            ]
            done = False
            for x in range(len(pointers)):
                for y in range(x + 1, len(pointers)):
                    if not _adjacent(adj, pointers[x], pointers[y]):
                        adj[b, a] = 0
                        changed = True
                        done = True
                        break
                if done:
                    break
    return changed


def _rule4(adj: np.ndarray) -> bool:
    # a - b with a chain a - c -> d -> b, c and b non-adjacent, a and d
    # adjacent: orient a -> b.
    m = adj.shape[0]
    changed = False
    for a in range(m):
        for b in range(m):
            if a == b or not _undirected(adj, a, b):
                continue
            done = False
            for c in range(m):
                if c in (a, b) or not _undirected(adj, a, c):
                    continue
                if _adjacent(adj, c, b):
                    continue
                for d in range(m):
                    if d in (a, b, c):
                        continue
                    if (
                        _directed(adj, c, d)
                        and _directed(adj, d, b)
                        and _adjacent(adj, a, d)
                    ):
                        adj[b, a] = 0
                        changed = True
                        done = True
                        break
                if done:
                    break
    return changed


_MEEK_RULES = (_rule1, _rule2, _rule3, _rule4)


def meek_closure(adj: np.ndarray) -> np.ndarray:
    """Apply the orientation rules in place until none fires; returns adj."""
    changed = True
    while changed:
        changed = False
        for rule in _MEEK_RULES:
            changed = rule(adj) or changed
    return adj


def dag_to_cpdag(g: DirectedGraph) -> np.ndarray:
    """CPDAG adjacency matrix of the Markov equivalence class of g."""
    skeleton, vstructures = skeleton_and_vstructures(g)
    m = g.num_nodes
    adj = np.zeros((m, m), dtype=np.int8)
    for u, v in skeleton:
        adj[u, v] = 1
        adj[v, u] = 1
    for i, j, k in vstructures:
        adj[k, i] = 0
        adj[k, j] = 0
    return meek_closure(adj)


def cpdag_distance(a: np.ndarray, b: np.ndarray) -> int:
    """Number of differing off-diagonal entries between two CPDAG matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"incompatible CPDAG shapes {a.shape} and {b.shape}")
    diff = a != b
    np.fill_diagonal(diff, False)
    return int(np.count_nonzero(diff))


def write_cpdag_csv(path: str | Path, adj: np.ndarray) -> None:
    np.savetxt(path, np.asarray(adj, dtype=int), delimiter=",", fmt="%d")


def read_cpdag_csv(path: str | Path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", dtype=int, ndmin=2)
