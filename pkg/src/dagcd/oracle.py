"""Exact solver by exhaustive enumeration, for desk-scale verification.

For up to five nodes, every orientation assignment of the superstructure
pairs (absent / forward / backward) is enumerated, acyclic ones are scored
exactly, and the global minimum is returned.  For a fixed support the
penalized objective decouples per column into a least-squares regression of
each node on its parents, so no iterative optimization is involved; this
gives an independent reference the iterative solver can be checked against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import neg_log_likelihood, validate_covariance
from .graph import DirectedGraph, Superstructure

MAX_EXACT_NODES = 5


@dataclass(frozen=True)
class OracleResult:
    optimal_objective: float
    optimal_support: tuple[tuple[int, int], ...]
    num_dags_enumerated: int


def constrained_mle(cov: np.ndarray, support, num_nodes: int | None = None) -> np.ndarray:
    """Maximum-likelihood factor with off-diagonal support fixed.

    Column j is the regression of node j on its parents in ``support``:
    with coefficients beta and residual variance w, the column gets
    ``1/sqrt(w)`` on the diagonal and ``-beta/sqrt(w)`` at the parents.
    Entries outside the support are exact zeros.
    """
    cov = validate_covariance(cov)
    m = cov.shape[0] if num_nodes is None else num_nodes
    if cov.shape[0] != m:
        raise ValueError(f"covariance is {cov.shape[0]}x{cov.shape[0]}, expected {m}")
    edges = sorted((int(u), int(v)) for u, v in support)
    if not DirectedGraph(m, edges).is_dag():
        raise ValueError("support is not a DAG")
    factor = np.zeros((m, m))
    for j in range(m):
        parents = [u for u, v in edges if v == j]
        if parents:
            beta = np.linalg.solve(cov[np.ix_(parents, parents)], cov[parents, j])
            resid_var = float(cov[j, j] - cov[j, parents] @ beta)
        else:
            beta = np.zeros(0)
            resid_var = float(cov[j, j])
        if resid_var <= 0.0:
            raise ValueError(f"nonpositive residual variance at node {j}")
        scale = resid_var**-0.5
        factor[j, j] = scale
        for i, coef in zip(parents, beta):
            factor[i, j] = -coef * scale
    return factor


def exhaustive_search(
    cov: np.ndarray, superstructure: Superstructure, lambda_sq: float
) -> OracleResult:
    """Global minimum of the penalized objective over DAGs in the superstructure.

    Ties are broken toward the smaller support, then lexicographically
    smaller edge list.
    """
    cov = validate_covariance(cov)
    m = cov.shape[0]
    if m > MAX_EXACT_NODES:
        raise ValueError(
            f"exhaustive search supports at most {MAX_EXACT_NODES} nodes, got {m}"
        )
    if superstructure.num_nodes != m:
        raise ValueError(
            f"superstructure is on {superstructure.num_nodes} nodes, covariance on {m}"
        )
    if lambda_sq < 0.0:
        raise ValueError(f"lambda_sq must be nonnegative, got {lambda_sq}")

    pairs = sorted(superstructure.pairs)
    best: tuple[float, int, tuple[tuple[int, int], ...]] | None = None
    num_dags = 0
    for assignment in itertools.product((0, 1, 2), repeat=len(pairs)):
        edges = []
        for (lo, hi), state in zip(pairs, assignment):
            if state == 1:
                edges.append((lo, hi))
            elif state == 2:
                edges.append((hi, lo))
        if not DirectedGraph(m, edges).is_dag():
            continue
        num_dags += 1
        support = tuple(sorted(edges))
        factor = constrained_mle(cov, support)
        objective = neg_log_likelihood(factor, cov) + lambda_sq * len(support)
        candidate = (objective, len(support), support)
        if best is None or candidate < best:
            best = candidate
    assert best is not None  # the empty support is always a DAG
    return OracleResult(
        optimal_objective=best[0],
        optimal_support=best[2],
        num_dags_enumerated=num_dags,
    )
