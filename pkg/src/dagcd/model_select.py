"""BIC scoring and penalty-grid selection.

The penalty weight is swept over c * log(m) / n for integer c (1..15 by
default), each grid point is solved cold-started, and the fit with the
smallest BIC wins; ties go to the smaller penalty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import neg_log_likelihood, validate_factor
from .graph import Superstructure
from .solver import SolveResult, SolverConfig, coordinate_descent

DEFAULT_GRID_MAX_C = 15


@dataclass(frozen=True)
class LambdaGrid:
    """Penalty grid lambda_sq = c * log(m) / n over the given c values."""

    m: int
    n: int
    c_values: tuple[float, ...] = field(
        default_factory=lambda: tuple(range(1, DEFAULT_GRID_MAX_C + 1))
    )

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not self.c_values:
            raise ValueError("c_values must be nonempty")
        if any(c <= 0 for c in self.c_values):
            raise ValueError(f"c values must be positive, got {self.c_values}")

    def lambda_sq_values(self) -> list[float]:
        return [c * math.log(self.m) / self.n for c in sorted(self.c_values)]


def bic_score(factor: np.ndarray, cov: np.ndarray, n: int) -> float:
    """n times the negative log-likelihood plus log(n) per nonzero entry.

    The diagonal is always nonzero and counts toward k, which shifts every
    score by m*log(n) and never changes which model wins.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    factor = validate_factor(factor)
    k = int(np.count_nonzero(factor))
    return n * neg_log_likelihood(factor, cov) + k * math.log(n)


def select_lambda(
    cov: np.ndarray,
    superstructure: Superstructure,
    n: int,
    grid: LambdaGrid,
    config: SolverConfig,
    progress: Callable[[float, int, float], None] | None = None,
) -> tuple[float, SolveResult]:
    """Solve once per grid penalty and keep the smallest-BIC fit.

    Every solve is cold-started from the identity, so grid points are
    independent.  A strict improvement is required to displace the
    incumbent, which makes ties resolve to the smaller penalty.

    ``progress``, if given, is called with (lambda_sq, loop, objective)
    after each full loop of each grid solve.
    """
    best: tuple[float, float, SolveResult] | None = None
    for lambda_sq in grid.lambda_sq_values():
        hook = None
        if progress is not None:
            hook = lambda loop, obj, _lam=lambda_sq: progress(_lam, loop, obj)
        result = coordinate_descent(
            cov,
            superstructure,
            SolverConfig(
                lambda_sq=lambda_sq,
                spacer_threshold_c=config.spacer_threshold_c,
                max_full_loops=config.max_full_loops,
                objective_tol=config.objective_tol,
            ),
            progress=hook,
        )
        score = bic_score(result.factor, cov, n)
        if best is None or score < best[0]:
            best = (score, lambda_sq, result)
    assert best is not None
    return best[1], best[2]
