"""Synthetic data from linear Gaussian structural equation models.

A model is a weighted DAG plus per-node noise variances: each variable is a
linear combination of its parents plus independent centered Gaussian noise.
Weights are drawn from {-0.8, -0.6, 0.6, 0.8} and noise variances from
{0.5, 1, 1.5}, the standard benchmark regime for this problem family.

All randomness flows through ``numpy.random.default_rng`` with explicit
integer seeds; weight and noise draws use seed streams spawned per stage so
identical seeds reproduce bit-identical outputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import validate_covariance
from .graph import DirectedGraph

EDGE_WEIGHTS = (-0.8, -0.6, 0.6, 0.8)
NOISE_VARIANCES = (0.5, 1.0, 1.5)


@dataclass(frozen=True)
class SemParams:
    """Connectivity matrix (zero diagonal, DAG support) and noise variances."""

    b: np.ndarray
    omega: np.ndarray

    def __post_init__(self) -> None:
        b = np.asarray(self.b, dtype=float)
        omega = np.asarray(self.omega, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ValueError(f"connectivity matrix must be square, got {b.shape}")
        if omega.shape != (b.shape[0],):
            raise ValueError(
                f"omega has shape {omega.shape}, expected ({b.shape[0]},)"
            )
        if (np.diagonal(b) != 0.0).any():
            raise ValueError("connectivity matrix has a nonzero diagonal entry")
        if (omega <= 0.0).any():
            raise ValueError("noise variances must be strictly positive")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "omega", omega)
        if self.graph().topological_order() is None:
            raise ValueError("connectivity support is not a DAG")

    @property
    def num_nodes(self) -> int:
        return self.b.shape[0]

    def edges(self) -> list[tuple[int, int]]:
        rows, cols = np.nonzero(self.b)
        return sorted(zip(rows.tolist(), cols.tolist()))

    def graph(self) -> DirectedGraph:
        return DirectedGraph(self.num_nodes, self.edges())


def random_dag(m: int, num_edges: int, seed: int) -> DirectedGraph:
    """Uniform random DAG on m nodes with exactly num_edges edges.

    Draws a random node ordering, picks num_edges of the m(m-1)/2 position
    pairs uniformly without replacement, and orients each edge from the
    earlier to the later position, so the result is acyclic by construction.
    """
    max_edges = m * (m - 1) // 2
    if num_edges < 0 or num_edges > max_edges:
        raise ValueError(f"num_edges must be in [0, {max_edges}], got {num_edges}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(m)
    pairs = [(p, q) for p in range(m) for q in range(p + 1, m)]
    chosen = rng.choice(len(pairs), size=num_edges, replace=False)
    edges = [(int(order[pairs[k][0]]), int(order[pairs[k][1]])) for k in sorted(chosen)]
    return DirectedGraph(m, edges)


def random_sem(g: DirectedGraph, seed: int) -> SemParams:
    """Draw edge weights and noise variances for a given DAG.

    Weight and noise draws come from independently spawned seed streams, so
    the noise draw does not depend on how many edges the graph has.
    """
    if not g.is_dag():
        raise ValueError("graph must be a DAG")
    weight_seed, noise_seed = np.random.SeedSequence(seed).spawn(2)
    weight_rng = np.random.default_rng(weight_seed)
    noise_rng = np.random.default_rng(noise_seed)
    b = np.zeros((g.num_nodes, g.num_nodes))
    for u, v in sorted(g.edges()):
        b[u, v] = weight_rng.choice(EDGE_WEIGHTS)
    omega = noise_rng.choice(NOISE_VARIANCES, size=g.num_nodes)
    return SemParams(b=b, omega=omega)


def simulate(params: SemParams, n: int, seed: int) -> np.ndarray:
    """Draw n i.i.d. samples; returns an (n, num_nodes) array.

    Noise is sampled all at once, then each variable is filled in a
    topological order as the weighted sum of its parents plus its noise
    column (forward substitution).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    order = params.graph().topological_order()
    if order is None:
        raise ValueError("connectivity support is not a DAG")
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal((n, params.num_nodes)) * np.sqrt(params.omega)
    data = np.zeros((n, params.num_nodes))
    for j in order:
        data[:, j] = data @ params.b[:, j] + eps[:, j]
    return data


def sample_covariance(data: np.ndarray) -> np.ndarray:
    """Column-centered covariance with 1/n normalization (ML convention)."""
    data = np.asarray(data, dtype=float)
    if data.ndim != 2:
        raise ValueError(f"data must be 2-D, got shape {data.shape}")
    n = data.shape[0]
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    if not np.isfinite(data).all():
        raise ValueError("data contains non-finite entries")
    centered = data - data.mean(axis=0)
    cov = centered.T @ centered / n
    degenerate = np.flatnonzero(np.diagonal(cov) <= 0.0)
    if degenerate.size:
        raise ValueError(f"columns {degenerate.tolist()} have zero variance")
    return validate_covariance(cov)


def write_dataset_csv(path: str | Path, data: np.ndarray) -> None:
    data = np.asarray(data, dtype=float)
    header = ",".join(f"x{j}" for j in range(data.shape[1]))
    np.savetxt(path, data, delimiter=",", header=header, comments="", fmt="%.17g")


def read_dataset_csv(path: str | Path) -> np.ndarray:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if not np.isfinite(data).all():
        raise ValueError(f"{path}: non-finite entries")
    return data


def write_sem_json(path: str | Path, params: SemParams) -> None:
    doc = {
        "b": params.b.tolist(),
        "omega": params.omega.tolist(),
        "edges": [list(e) for e in params.edges()],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def read_sem_json(path: str | Path) -> SemParams:
    doc = json.loads(Path(path).read_text())
    params = SemParams(b=np.asarray(doc["b"]), omega=np.asarray(doc["omega"]))
    edges = sorted(tuple(e) for e in doc.get("edges", []))
    if edges != params.edges():
        raise ValueError(f"{path}: edge list does not match connectivity support")
    return params
