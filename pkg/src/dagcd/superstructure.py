"""Candidate-edge estimation via per-node lasso regressions.

The solver only orients edges inside an undirected superstructure.  When no
trusted superstructure is available, the complete graph is always valid;
estimating one from data shrinks the search space.  We regress each variable
on all others with an l1 penalty, working directly on the covariance (Gram
formulation), and connect a pair when either regression selects it (union
rule) or only when both do (intersection rule).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import validate_covariance
from .graph import Superstructure


@dataclass(frozen=True)
class NsConfig:
    rho: float
    rule: str = "union"
    max_iters: int = 1000
    tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.rho < 0.0:
            raise ValueError(f"rho must be nonnegative, got {self.rho}")
        if self.rule not in ("union", "intersection"):
            raise ValueError(f"rule must be 'union' or 'intersection', got {self.rule!r}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol < 0.0:
            raise ValueError(f"tol must be nonnegative, got {self.tol}")


class NeighborhoodSelectionError(RuntimeError):
    """A per-node lasso failed to converge; carries the partial result."""

    def __init__(self, message: str, partial: Superstructure):
        super().__init__(message)
        self.partial = partial


def default_rho(m: int, n: int, scale: float = 1.0) -> float:
    """Standard lasso-theory penalty level sqrt(log m / n), times a constant."""
    if m < 1 or n < 1:
        raise ValueError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    return scale * math.sqrt(math.log(m) / n) if m > 1 else 0.0


def _lasso_gram(gram: np.ndarray, target: np.ndarray, rho: float,
                max_iters: int, tol: float) -> np.ndarray | None:
    """Cyclic soft-thresholding on 0.5*b'Gb - c'b + rho*|b|_1.

    Returns the coefficient vector, or None when max_iters sweeps did not
    bring the largest per-sweep coefficient change under tol.
    """
    p = gram.shape[0]
    beta = np.zeros(p)
    for _ in range(max_iters):
        delta = 0.0
        for k in range(p):
            resid = target[k] - gram[k] @ beta + gram[k, k] * beta[k]
            new = math.copysign(max(abs(resid) - rho, 0.0), resid) / gram[k, k]
            delta = max(delta, abs(new - beta[k]))
            beta[k] = new
        if delta <= tol:
            return beta
    return None


def neighborhood_selection(cov: np.ndarray, config: NsConfig) -> Superstructure:
    """Estimate an undirected superstructure from the covariance alone.

    Node j's neighborhood is the nonzero set of the l1-penalized regression
    of column j on all other columns; neighborhoods are combined with the
    configured union/intersection rule.
    """
    cov = validate_covariance(cov)
    m = cov.shape[0]
    selected = np.zeros((m, m), dtype=bool)
    for j in range(m):
        others = [k for k in range(m) if k != j]
        if not others:
            break
        gram = cov[np.ix_(others, others)]
        target = cov[others, j]
        beta = _lasso_gram(gram, target, config.rho, config.max_iters, config.tol)
        if beta is None:
            partial = _combine(selected, config.rule, m)
            raise NeighborhoodSelectionError(
                f"lasso for node {j} did not converge in {config.max_iters} sweeps",
                partial,
            )
        for k, b in zip(others, beta):
            if b != 0.0:
                selected[j, k] = True
    return _combine(selected, config.rule, m)


def _combine(selected: np.ndarray, rule: str, m: int) -> Superstructure:
    pairs = []
    for i in range(m):
        for j in range(i + 1, m):
            if rule == "union":
                keep = selected[i, j] or selected[j, i]
            else:
                keep = selected[i, j] and selected[j, i]
            if keep:
                pairs.append((i, j))
    return Superstructure.from_edges(m, pairs)


def complete_superstructure(m: int) -> Superstructure:
    """All m(m-1)/2 pairs."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return Superstructure.from_edges(
        m, [(i, j) for i in range(m) for j in range(i + 1, m)]
    )
