"""Scikit-learn style front end for the DAG learner.

``L0DagLearner`` wraps the full pipeline (covariance, superstructure,
penalty selection, coordinate descent, CPDAG conversion) behind a
``fit(X)`` interface so it composes with the usual estimator tooling
(``get_params`` / ``set_params`` / ``clone``).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .core import neg_log_likelihood
from .cpdag import dag_to_cpdag
from .graph import DirectedGraph, Superstructure
from .model_select import DEFAULT_GRID_MAX_C, LambdaGrid, bic_score, select_lambda
from .simulate import sample_covariance
from .solver import SolverConfig, coordinate_descent
from .superstructure import NsConfig, complete_superstructure, default_rho, neighborhood_selection


class L0DagLearner(BaseEstimator):
    """Learn a linear Gaussian Bayesian network by penalized coordinate descent.

    Parameters
    ----------
    lambda_sq : float or None
        Weight on the number of edges.  None selects it by BIC over the
        grid c * log(m) / n, c = 1..bic_grid_max_c.
    bic_grid_max_c : int
        Largest grid multiplier used when lambda_sq is None.
    superstructure : "complete", "ns", Superstructure, or iterable of pairs
        Candidate edge set.  "ns" estimates it from the data by per-node
        lasso regressions; an explicit set restricts the search directly.
    ns_rho : float or None
        Lasso penalty for superstructure estimation; None uses
        sqrt(log(m) / n).
    spacer_c : int
        Support repeat count that triggers a spacer step.
    max_full_loops : int
        Safety cap on coordinate-descent loops.
    objective_tol : float
        Per-loop objective decrease below which the solve stops.

    Attributes
    ----------
    precision_factor_ : (m, m) ndarray whose off-diagonal support is the
        learned DAG; ``precision_factor_ @ precision_factor_.T`` estimates
        the inverse covariance.
    edges_ : tuple of learned directed edges (i, j).
    connectivity_ : (m, m) ndarray of edge weights (regression form).
    noise_variances_ : (m,) ndarray of per-node residual variances.
    cpdag_ : 0/1 adjacency matrix of the learned equivalence class.
    lambda_sq_ : penalty actually used.
    bic_ : BIC score of the fit.
    """

    def __init__(
        self,
        lambda_sq: float | None = None,
        bic_grid_max_c: int = DEFAULT_GRID_MAX_C,
        superstructure="complete",
        ns_rho: float | None = None,
        spacer_c: int = 5,
        max_full_loops: int = 10_000,
        objective_tol: float = 1e-9,
    ):
        self.lambda_sq = lambda_sq
        self.bic_grid_max_c = bic_grid_max_c
        self.superstructure = superstructure
        self.ns_rho = ns_rho
        self.spacer_c = spacer_c
        self.max_full_loops = max_full_loops
        self.objective_tol = objective_tol

    def _resolve_superstructure(self, cov: np.ndarray, n: int) -> Superstructure:
        m = cov.shape[0]
        if isinstance(self.superstructure, Superstructure):
            return self.superstructure
        if isinstance(self.superstructure, str):
            if self.superstructure == "complete":
                return complete_superstructure(m)
            if self.superstructure == "ns":
                rho = default_rho(m, n) if self.ns_rho is None else self.ns_rho
                return neighborhood_selection(cov, NsConfig(rho=rho))
            raise ValueError(
                f"superstructure must be 'complete', 'ns', a Superstructure, "
                f"or edge pairs; got {self.superstructure!r}"
            )
        return Superstructure.from_edges(m, self.superstructure)

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64, estimator=self)
        n, m = X.shape
        cov = sample_covariance(X)
        superstructure = self._resolve_superstructure(cov, n)
        config = SolverConfig(
            lambda_sq=0.0 if self.lambda_sq is None else self.lambda_sq,
            spacer_threshold_c=self.spacer_c,
            max_full_loops=self.max_full_loops,
            objective_tol=self.objective_tol,
        )
        if self.lambda_sq is None:
            grid = LambdaGrid(m, n, tuple(range(1, self.bic_grid_max_c + 1)))
            chosen, result = select_lambda(cov, superstructure, n, grid, config)
        else:
            chosen = self.lambda_sq
            result = coordinate_descent(cov, superstructure, config)

        factor = result.factor
        diag = np.diagonal(factor)
        connectivity = -factor / diag[np.newaxis, :]
        np.fill_diagonal(connectivity, 0.0)

        self.n_features_in_ = m
        self.covariance_ = cov
        self.superstructure_ = superstructure
        self.lambda_sq_ = chosen
        self.precision_factor_ = factor
        self.edges_ = result.support
        self.connectivity_ = connectivity
        self.noise_variances_ = 1.0 / diag**2
        self.cpdag_ = dag_to_cpdag(DirectedGraph(m, result.support))
        self.objective_ = result.objective
        self.objective_trace_ = result.objective_trace
        self.n_full_loops_ = result.full_loops
        self.converged_ = result.converged
        self.bic_ = bic_score(factor, cov, n)
        return self

    def graph(self) -> DirectedGraph:
        """Learned DAG as a DirectedGraph."""
        check_is_fitted(self)
        return DirectedGraph(self.n_features_in_, self.edges_)

    def score(self, X, y=None) -> float:
        """Negated Gaussian negative log-likelihood on held-out data."""
        check_is_fitted(self)
        X = check_array(X, dtype=np.float64, estimator=self)
        return -neg_log_likelihood(self.precision_factor_, sample_covariance(X))
