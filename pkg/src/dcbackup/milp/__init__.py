"""Self-contained exact MILP toolkit: model, simplex, branch-and-bound, oracle."""

from .bb import (DENSE_LIMIT, exact_objective, make_lp, propagate_bounds, reduced_cost_bounds,
                 restrict, solve_bb, solve_lp_relaxation)
from .exhaustive import DEFAULT_CAP, DomainTooLarge, domain_size, solve_exhaustive
from .model import (BOUND_EXCEEDED, EQ, GE, INFEASIBLE, LE, MAX, MIN, OPTIMAL, UNBOUNDED,
                    Constraint, MILPModel, ModelError, SolveResult, SolveStats, Variable)
from .simplex import LPOutcome, simplex

__all__ = [
    "BOUND_EXCEEDED", "Constraint", "DEFAULT_CAP", "DENSE_LIMIT", "DomainTooLarge", "EQ", "GE",
    "INFEASIBLE", "LE", "LPOutcome", "MAX", "MILPModel", "MIN", "ModelError", "OPTIMAL",
    "SolveResult", "SolveStats", "UNBOUNDED", "Variable", "domain_size", "exact_objective",
    "make_lp", "propagate_bounds", "reduced_cost_bounds", "restrict", "simplex", "solve_bb", "solve_exhaustive", "solve_lp_relaxation",
]
