"""Cyclic coordinate descent over precision factors, with spacer steps.

One solve minimizes the penalized objective over factors whose off-diagonal
support stays a DAG inside a given superstructure.  Each coordinate has a
closed-form minimizer: the smooth slice is a parabola (off-diagonal) or a
parabola plus ``-2 log x`` (diagonal), and the sparsity penalty turns the
off-diagonal update into a hard threshold that writes an exact zero.

A "spacer step" is a single unpenalized re-fit of every coordinate currently
in the support.  It is triggered whenever the same support has been seen a
configured number of times, which stabilizes the support sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import (
    offdiag_support,
    penalized_objective,
    validate_covariance,
    coord_linear_term,
)
from .graph import DirectedGraph, Superstructure

# When True, re-verify acyclicity after every coordinate write (slow; test use).
DEBUG_CHECK_ACYCLIC = False


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for one coordinate-descent solve.

    lambda_sq is the weight on the off-diagonal nonzero count.  A support
    seen spacer_threshold_c times (counted once per full loop) triggers a
    spacer step.  The solve stops when a full loop improves the objective by
    less than objective_tol, or at max_full_loops.
    """

    lambda_sq: float
    spacer_threshold_c: int = 5
    max_full_loops: int = 10_000
    objective_tol: float = 1e-9

    def __post_init__(self) -> None:
        if self.lambda_sq < 0.0:
            raise ValueError(f"lambda_sq must be nonnegative, got {self.lambda_sq}")
        if self.spacer_threshold_c < 1:
            raise ValueError(
                f"spacer_threshold_c must be >= 1, got {self.spacer_threshold_c}"
            )
        if self.max_full_loops < 1:
            raise ValueError(f"max_full_loops must be >= 1, got {self.max_full_loops}")
        if self.objective_tol < 0.0:
            raise ValueError(f"objective_tol must be >= 0, got {self.objective_tol}")


@dataclass
class SolveResult:
    """Converged factor plus trace and diagnostics.

    objective_trace[0] is the objective at the identity start; one entry is
    appended after each completed full loop (post spacer step, if any), so
    the trace is non-increasing and has full_loops + 1 entries.
    """

    factor: np.ndarray
    support: tuple[tuple[int, int], ...]
    objective_trace: list[float] = field(default_factory=list)
    full_loops: int = 0
    spacer_steps: int = 0
    converged: bool = False

    @property
    def objective(self) -> float:
        return self.objective_trace[-1]


def offdiag_minimizer(
    factor: np.ndarray, cov: np.ndarray, u: int, v: int, lambda_sq: float
) -> float:
    """Single-coordinate minimizer for an off-diagonal entry, acyclicity aside.

    The unpenalized minimizer of the slice is ``-a / (2 cov_uu)`` where a is
    the slice's linear coefficient; it beats the zero candidate exactly when
    ``lambda_sq <= a**2 / (4 cov_uu)`` (kept at equality).  Returns the value
    without writing it; the caller decides after the cycle check.
    """
    if u == v:
        raise ValueError("offdiag_minimizer called on a diagonal entry")
    a = coord_linear_term(factor, cov, u, v)
    d = cov[u, u]
    if lambda_sq <= a * a / (4.0 * d):
        return -a / (2.0 * d)
    return 0.0


def diag_minimizer(factor: np.ndarray, cov: np.ndarray, u: int) -> float:
    """Single-coordinate minimizer for a diagonal entry; always positive.

    Solves ``-2/x + 2 cov_uu x + a = 0`` for x > 0, where a is the slice's
    linear coefficient.
    """
    d = cov[u, u]
    if d <= 0.0:
        raise ValueError(f"covariance diagonal entry {u} is nonpositive")
    a = coord_linear_term(factor, cov, u, u)
    return (-a + math.sqrt(a * a + 16.0 * d)) / (4.0 * d)


def spacer_step(factor: np.ndarray, cov: np.ndarray) -> None:
    """Re-fit every currently nonzero coordinate once, without the penalty.

    Sweeps the support row-major, diagonal included, writing each entry's
    unpenalized minimizer in place.  The support cannot grow and the
    negative log-likelihood cannot increase.
    """
    m = factor.shape[0]
    for u in range(m):
        for v in range(m):
            if u == v:
                factor[u, u] = diag_minimizer(factor, cov, u)
            elif factor[u, v] != 0.0:
                factor[u, v] = offdiag_minimizer(factor, cov, u, v, 0.0)


def full_sweep(
    factor: np.ndarray,
    cov: np.ndarray,
    superstructure: Superstructure,
    lambda_sq: float,
    graph: DirectedGraph | None = None,
) -> DirectedGraph:
    """One full loop of coordinate updates, in place.

    Rows are visited in order; a row update refreshes the diagonal entry
    first, then each superstructure neighbor v of u in ascending order.  A
    candidate off-diagonal nonzero is written only if the edge u -> v does
    not close a cycle through the other current edges; otherwise the entry
    is set to an exact zero.  ``graph`` must mirror the factor's support
    (rebuilt from the factor when omitted) and is returned re-synchronized.
    """
    m = factor.shape[0]
    if graph is None:
        graph = DirectedGraph(m, offdiag_support(factor))
    neighbors = superstructure.neighbor_lists()
    for u in range(m):
        factor[u, u] = diag_minimizer(factor, cov, u)
        for v in neighbors[u]:
            # The cycle check must see the support without (u, v) itself.
            if graph.has_edge(u, v):
                graph.remove_edge(u, v)
            if graph.would_create_cycle(u, v):
                factor[u, v] = 0.0
            else:
                value = offdiag_minimizer(factor, cov, u, v, lambda_sq)
                factor[u, v] = value
                if value != 0.0:
                    graph.add_edge(u, v)
            if DEBUG_CHECK_ACYCLIC:
                assert graph.is_dag(), "support lost acyclicity"
    return graph


def coordinate_descent(
    cov: np.ndarray,
    superstructure: Superstructure,
    config: SolverConfig,
    progress: Callable[[int, float], None] | None = None,
) -> SolveResult:
    """Run cyclic coordinate descent from the identity factor.

    Repeats full sweeps until a loop improves the objective by less than
    the configured tolerance.  The support seen after each full loop is
    counted, and a repeat count reaching the configured threshold triggers
    a spacer step.

    ``progress``, if given, is called with (loop index, objective) after
    every full loop.
    """
    cov = validate_covariance(cov)
    m = cov.shape[0]
    if superstructure.num_nodes != m:
        raise ValueError(
            f"superstructure is on {superstructure.num_nodes} nodes, covariance on {m}"
        )

    factor = np.eye(m)
    graph = DirectedGraph(m)
    support_counts: dict[tuple[tuple[int, int], ...], int] = {}
    trace = [penalized_objective(factor, cov, config.lambda_sq)]
    spacer_steps_taken = 0
    converged = False
    loops = 0

    while loops < config.max_full_loops:
        graph = full_sweep(factor, cov, superstructure, config.lambda_sq, graph)
        loops += 1

        key = tuple(sorted(graph.edges()))
        support_counts[key] = support_counts.get(key, 0) + 1
        if support_counts[key] >= config.spacer_threshold_c:
            spacer_step(factor, cov)
            spacer_steps_taken += 1
            support_counts[key] = 0
            new_support = offdiag_support(factor)
            if new_support != key:
                # The unpenalized re-fit wrote an exact zero; resync the graph.
                graph = DirectedGraph(m, new_support)

        objective = penalized_objective(factor, cov, config.lambda_sq)
        trace.append(objective)
        if progress is not None:
            progress(loops, objective)
        if trace[-2] - trace[-1] < config.objective_tol:
            converged = True
            break

    return SolveResult(
        factor=factor,
        support=offdiag_support(factor),
        objective_trace=trace,
        full_loops=loops,
        spacer_steps=spacer_steps_taken,
        converged=converged,
    )
