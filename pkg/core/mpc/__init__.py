"""
Viewpoint-tracking model predictive control.
"""
from core.mpc.costs import stage_cost, terminal_cost
from core.mpc.solver import (
    MpcSolution,
    MpcSolver,
    build_constraints,
    evaluate_objective_and_violation,
    objective_gradient,
    rollout,
    shift_warm_start,
)

__all__ = [
    "stage_cost",
    "terminal_cost",
    "MpcSolution",
    "MpcSolver",
    "build_constraints",
    "evaluate_objective_and_violation",
    "objective_gradient",
    "rollout",
    "shift_warm_start",
]
