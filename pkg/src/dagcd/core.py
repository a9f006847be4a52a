"""Dense numeric primitives shared by the solver, oracle and scoring code.

The estimated object throughout is a square "precision factor" F with a
strictly positive diagonal: F F^T is the inverse covariance of the fitted
Gaussian model, and the off-diagonal nonzero pattern of F encodes the
directed edges of the fitted graph.  Everything is dense float64; problem
sizes are a few hundred variables at most.
"""

from __future__ import annotations

import numpy as np

SYMMETRY_ATOL = 1e-12


def validate_covariance(cov: np.ndarray) -> np.ndarray:
    """Validate a sample covariance matrix and return it as float64.

    Requires a finite square matrix, symmetric to within ``SYMMETRY_ATOL``
    and with strictly positive diagonal.  Symmetry is checked here once;
    downstream code assumes it.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError(f"covariance must be square, got shape {cov.shape}")
    if not np.isfinite(cov).all():
        raise ValueError("covariance contains non-finite entries")
    if not np.allclose(cov, cov.T, rtol=0.0, atol=SYMMETRY_ATOL):
        raise ValueError(f"covariance is not symmetric within {SYMMETRY_ATOL}")
    if (np.diagonal(cov) <= 0.0).any():
        raise ValueError("covariance has a nonpositive diagonal entry")
    return cov


def validate_factor(factor: np.ndarray, dim: int | None = None) -> np.ndarray:
    """Validate a precision factor: square, finite, positive diagonal."""
    factor = np.asarray(factor, dtype=float)
    if factor.ndim != 2 or factor.shape[0] != factor.shape[1]:
        raise ValueError(f"factor must be square, got shape {factor.shape}")
    if dim is not None and factor.shape[0] != dim:
        raise ValueError(
            f"dimension mismatch: factor is {factor.shape[0]}x{factor.shape[0]}, "
            f"expected {dim}x{dim}"
        )
    if not np.isfinite(factor).all():
        raise ValueError("factor contains non-finite entries")
    if (np.diagonal(factor) <= 0.0).any():
        raise ValueError("factor has a nonpositive diagonal entry")
    return factor


def offdiag_support(factor: np.ndarray) -> tuple[tuple[int, int], ...]:
    """Exact nonzero off-diagonal positions of ``factor``, sorted.

    Membership is exact (entry != 0.0): the solver writes literal zeros when
    it excludes an edge, so no tolerance is involved.
    """
    mask = factor != 0.0
    np.fill_diagonal(mask, False)
    rows, cols = np.nonzero(mask)
    return tuple(sorted(zip(rows.tolist(), cols.tolist())))


def num_offdiag_nonzeros(factor: np.ndarray) -> int:
    mask = factor != 0.0
    np.fill_diagonal(mask, False)
    return int(np.count_nonzero(mask))


def neg_log_likelihood(factor: np.ndarray, cov: np.ndarray) -> float:
    """Gaussian negative log-likelihood of a precision factor.

    Returns ``sum_i -2*log(F_ii) + trace(F F^T cov)``.  The trace term is
    evaluated as ``sum(F * (cov @ F))``, which is valid because ``cov`` is
    symmetric.
    """
    factor = validate_factor(factor)
    cov = validate_covariance(cov)
    if factor.shape[0] != cov.shape[0]:
        raise ValueError(
            f"dimension mismatch: factor {factor.shape[0]}, covariance {cov.shape[0]}"
        )
    log_term = -2.0 * float(np.log(np.diagonal(factor)).sum())
    trace_term = float(np.sum(factor * (cov @ factor)))
    return log_term + trace_term


def penalized_objective(factor: np.ndarray, cov: np.ndarray, lambda_sq: float) -> float:
    """Negative log-likelihood plus ``lambda_sq`` per off-diagonal nonzero."""
    if lambda_sq < 0.0:
        raise ValueError(f"lambda_sq must be nonnegative, got {lambda_sq}")
    return neg_log_likelihood(factor, cov) + lambda_sq * num_offdiag_nonzeros(factor)


def coord_linear_term(factor: np.ndarray, cov: np.ndarray, u: int, v: int) -> float:
    """Linear coefficient of the trace term along the (u, v) coordinate.

    Restricting ``trace(F F^T cov)`` to the single entry x = F_uv gives a
    parabola ``cov_uu * x**2 + a * x + const``; this returns ``a``, computed
    as the pair of column/row sums that exclude index u.  It does not depend
    on the current value of F_uv.
    """
    m = factor.shape[0]
    if not (0 <= u < m and 0 <= v < m):
        raise IndexError(f"indices ({u}, {v}) out of range for dimension {m}")
    col = factor[:, v]
    excluded = factor[u, v] * cov[u, u]
    return float((col @ cov[:, u] - excluded) + (col @ cov[u, :] - excluded))
