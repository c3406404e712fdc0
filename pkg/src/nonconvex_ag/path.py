"""Regularization paths over an equally spaced lambda grid."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .ag import (
    CompositeProblem,
    FitResult,
    SolverConfig,
    ag_solve,
    ista_solve,
    original_schedule,
    proposed_schedule,
)
from .errors import DimensionMismatchError, ParameterError, PreconditionError
from .model import Dataset, Family, loss, loss_grad, smooth_lipschitz
from .penalty import PenaltyKind, PenaltySpec, dc_smooth_lipschitz

__all__ = [
    "PathResult",
    "lambda_max",
    "lambda_grid",
    "path_solve",
    "select_by_validation",
    "fit_solver",
]


@dataclass
class PathResult:
    lambdas: np.ndarray
    fits: list
    kind: PenaltyKind
    shape: float
    family: Family = Family.LINEAR
    selected: int | None = None
    ill_posed: bool = False
    validation_loss: np.ndarray | None = field(default=None, repr=False)

    @property
    def coefficients(self) -> np.ndarray:
        """Array of shape ``(len(lambdas), q + 1)``."""
        return np.array([f.beta for f in self.fits])

    @property
    def selected_fit(self) -> FitResult | None:
        return None if self.selected is None else self.fits[self.selected]


def lambda_max(data: Dataset) -> float:
    """Smallest lambda for which the null model is stationary.

    At ``beta = (null intercept, 0, ..., 0)`` the derivative of the concave
    remainder vanishes, so zero is stationary iff ``lam >= |grad_j f|`` for
    every penalized ``j``. The gradient is ``<x_j, ybar - y> / n`` for both
    families.
    """
    if not data.is_standardized():
        raise PreconditionError("lambda_max expects standardized (centered) covariates")
    g = loss_grad(data, data.null_coefficients())
    return float(np.max(np.abs(g[data.penalized_mask])))


def lambda_grid(lmax: float, count: int = 50) -> np.ndarray:
    """`count` equally spaced values from `lmax` down to 0."""
    if count < 2:
        raise ParameterError(f"count must be >= 2, got {count}")
    if not (np.isfinite(lmax) and lmax >= 0):
        raise ParameterError(f"lmax must be finite and >= 0, got {lmax}")
    if lmax == 0:
        warnings.warn("lambda_max is 0; the grid collapses to the single value 0",
                      stacklevel=2)
        return np.zeros(1)
    grid = np.linspace(lmax, 0.0, count)
    grid[0], grid[-1] = lmax, 0.0
    return grid


def fit_solver(problem, solver, config, x0):
    """Dispatch on solver name: ``ag``, ``ag-orig`` or ``ista``."""
    if solver == "ag":
        return ag_solve(problem, proposed_schedule(problem.L_psi), config, x0)
    if solver == "ag-orig":
        return ag_solve(problem, original_schedule(problem.L_psi), config, x0)
    if solver == "ista":
        return ista_solve(problem, config, x0)
    raise ParameterError(f"unknown solver {solver!r}")


def path_solve(data: Dataset, kind, shape, grid, config: SolverConfig = SolverConfig(),
               warm_start: bool = True, solver: str = "ag") -> PathResult:
    """Fit the penalized model at every lambda in `grid` (decreasing order).

    Warm starts initialize each fit at the previous solution; the first fit
    (and every fit when ``warm_start=False``) starts from the null model.
    Solver errors are re-raised with a ``lambda_index`` attribute.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ParameterError("grid must be a nonempty 1-D array")
    if np.any(grid < 0) or np.any(np.diff(grid) >= 0):
        raise ParameterError("grid must be nonnegative and strictly decreasing")
    base = PenaltySpec(kind, float(grid[0]), shape)
    L_psi = smooth_lipschitz(data) + dc_smooth_lipschitz(base)
    null = data.null_coefficients()
    fits = []
    x0 = null
    for i, lam in enumerate(grid):
        problem = CompositeProblem(data, base.with_lambda(lam), L_psi=L_psi)
        try:
            fit = fit_solver(problem, solver, config, x0)
        except (ValueError, FloatingPointError) as exc:
            exc.lambda_index = i
            raise
        fits.append(fit)
        if warm_start:
            x0 = fit.beta
    return PathResult(grid, fits, base.kind, base.shape, data.family,
                      ill_posed=data.q + 1 > data.n)


def select_by_validation(path: PathResult, validation: Dataset) -> int:
    """Index of the fit with the smallest unpenalized validation loss.

    Ties go to the larger lambda (the sparser end of the path). The chosen
    index is also stored in ``path.selected``.
    """
    if not path.fits:
        raise ParameterError("empty path")
    if validation.family is not path.family:
        raise ParameterError(
            f"validation family {validation.family.value} does not match "
            f"path family {path.family.value}")
    if validation.q + 1 != path.fits[0].beta.size:
        raise DimensionMismatchError("validation design has the wrong number of covariates")
    losses = np.array([loss(validation, f.beta) for f in path.fits])
    path.validation_loss = losses
    path.selected = int(np.argmin(losses))
    return path.selected
