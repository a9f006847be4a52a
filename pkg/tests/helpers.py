"""Shared test utilities: random instances and independent brute-force oracles."""

from __future__ import annotations

import numpy as np

from dagcd import random_dag, random_sem, sample_covariance, simulate


def random_pd_cov(rng: np.random.Generator, m: int) -> np.ndarray:
    """Well-conditioned random positive-definite covariance."""
    a = rng.standard_normal((m + 3, m))
    cov = a.T @ a / (m + 3) + 0.2 * np.eye(m)
    return (cov + cov.T) / 2.0


def random_positive_diag_factor(
    rng: np.random.Generator, m: int, density: float = 0.4
) -> np.ndarray:
    """Random factor with positive diagonal; support need not be a DAG."""
    factor = rng.standard_normal((m, m)) * (rng.random((m, m)) < density)
    np.fill_diagonal(factor, rng.uniform(0.3, 2.0, size=m))
    return factor


def sem_instance(seed: int, m: int, num_edges: int, n: int):
    """Simulated (graph, params, data, covariance) tuple from one master seed."""
    seqs = np.random.SeedSequence(seed).spawn(3)
    ints = [int(s.generate_state(1, dtype=np.uint64)[0]) for s in seqs]
    g = random_dag(m, num_edges, ints[0])
    params = random_sem(g, ints[1])
    data = simulate(params, n, ints[2])
    return g, params, data, sample_covariance(data)


def slice_objective_values(
    factor: np.ndarray,
    cov: np.ndarray,
    u: int,
    v: int,
    lambda_sq: float,
    values: np.ndarray,
) -> np.ndarray:
    """Penalized objective as entry (u, v) sweeps ``values``, all else fixed.

    Brute-force evaluation of the defining formula (log det term, literal
    trace of the triple product, exact off-diagonal nonzero count) on a
    batch of modified matrices; independent of any closed-form update math.
    """
    values = np.asarray(values, dtype=float)
    k = values.shape[0]
    batch = np.repeat(factor[np.newaxis], k, axis=0)
    batch[:, u, v] = values
    trace = np.einsum("kij,klj,li->k", batch, batch, cov)
    diag = np.diagonal(batch, axis1=1, axis2=2)
    log_term = -2.0 * np.log(diag).sum(axis=1)
    offdiag = batch != 0.0
    offdiag[:, np.arange(factor.shape[0]), np.arange(factor.shape[0])] = False
    return log_term + trace + lambda_sq * offdiag.sum(axis=(1, 2))


def grid_search_coordinate(
    factor: np.ndarray,
    cov: np.ndarray,
    u: int,
    v: int,
    lambda_sq: float,
    lo: float,
    hi: float,
    fine_step: float = 1e-5,
) -> float:
    """Grid-search minimizer of the (u, v) coordinate slice at fine_step resolution.

    Two-stage search (coarse pass at 100x the fine step, then a fine pass
    around the coarse argmin); exact for these slices because each smooth
    piece is strictly convex.  The exact-zero candidate is always included
    so the sparsity discontinuity is handled.
    """
    coarse_step = fine_step * 100
    coarse = np.arange(lo, hi + coarse_step / 2, coarse_step)
    vals = slice_objective_values(factor, cov, u, v, lambda_sq, coarse)
    center = coarse[int(np.argmin(vals))]
    fine = np.arange(center - coarse_step, center + coarse_step + fine_step / 2, fine_step)
    fine = fine[(fine >= lo) & (fine <= hi)]
    candidates = np.concatenate([fine, [0.0]]) if u != v else fine
    vals = slice_objective_values(factor, cov, u, v, lambda_sq, candidates)
    return float(candidates[int(np.argmin(vals))])
