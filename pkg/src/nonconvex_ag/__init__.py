"""Accelerated gradient solvers for SCAD/MCP penalized linear and logistic regression."""

from .ag import (
    AGSchedule,
    CompositeProblem,
    FitResult,
    SolverConfig,
    Status,
    ag_solve,
    ag_solve_momentum_form,
    alpha_bounds,
    complexity_bound_terms,
    gradient_mapping,
    ista_solve,
    original_schedule,
    proposed_schedule,
    verify_conditions,
)
from .model import Dataset, Family, load_csv, loss, loss_grad, smooth_lipschitz, standardize
from .penalty import PenaltyKind, PenaltySpec, penalty_value, prox_l1, soft_threshold

__version__ = "0.1.0"
