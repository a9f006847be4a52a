"""Learning linear Gaussian Bayesian networks by L0-penalized coordinate descent."""

from .core import (
    coord_linear_term,
    neg_log_likelihood,
    offdiag_support,
    penalized_objective,
    validate_covariance,
    validate_factor,
)
from .cpdag import cpdag_distance, dag_to_cpdag, skeleton_and_vstructures
from .estimator import L0DagLearner
from .graph import DirectedGraph, Superstructure, read_edge_list, write_edge_list
from .model_select import LambdaGrid, bic_score, select_lambda
from .oracle import OracleResult, constrained_mle, exhaustive_search
from .simulate import (
    SemParams,
    random_dag,
    random_sem,
    sample_covariance,
    simulate,
)
from .solver import (
    SolveResult,
    SolverConfig,
    coordinate_descent,
    diag_minimizer,
    full_sweep,
    offdiag_minimizer,
    spacer_step,
)
from .superstructure import (
    NeighborhoodSelectionError,
    NsConfig,
    complete_superstructure,
    default_rho,
    neighborhood_selection,
)

__version__ = "0.1.0"

__all__ = [
    "L0DagLearner",
    "DirectedGraph",
    "Superstructure",
    "SolverConfig",
    "SolveResult",
    "SemParams",
    "NsConfig",
    "NeighborhoodSelectionError",
    "LambdaGrid",
    "OracleResult",
    "coordinate_descent",
    "full_sweep",
    "offdiag_minimizer",
    "diag_minimizer",
    "spacer_step",
    "penalized_objective",
    "neg_log_likelihood",
    "coord_linear_term",
    "offdiag_support",
    "validate_covariance",
    "validate_factor",
    "random_dag",
    "random_sem",
    "simulate",
    "sample_covariance",
    "neighborhood_selection",
    "complete_superstructure",
    "default_rho",
    "skeleton_and_vstructures",
    "dag_to_cpdag",
    "cpdag_distance",
    "constrained_mle",
    "exhaustive_search",
    "bic_score",
    "select_lambda",
    "read_edge_list",
    "write_edge_list",
]
