"""
Enums for configuration settings
"""
from enum import Enum


class PlannerKind(str, Enum):
    """Viewpoint planner options"""
    GREEDY = "greedy"
    MCTS = "mcts"
    EXPERT = "expert"


class SolverStatus(str, Enum):
    """Outcome of a single MPC solve"""
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    INFEASIBLE = "infeasible"


class RewardMode(str, Enum):
    """How the per-step information gain is accounted"""
    REALIZED = "realized"  # entropy before minus entropy after the update
    EXPECTED = "expected"  # closed-form expected MI of the visible set


class EnvironmentKind(str, Enum):
    """Environment generator options"""
    RANDOM = "random"  # random rectangles with connectivity rejection
    STRUCTURED = "structured"  # room with a doorway plus a dead-end corridor
