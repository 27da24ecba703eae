"""
Planner construction from a RunConfig.
"""
from typing import Optional

import numpy as np

from core.config.enums import PlannerKind
from core.config.run_config import RunConfig
from core.mpc.solver import MpcSolver
from core.planners.base import Planner
from core.planners.expert import ExpertPlanner
from core.planners.greedy import GreedyPlanner
from core.planners.mcts import MctsPlanner


def create_planner(kind, run_config: RunConfig, rng: np.random.Generator,
                   solver: Optional[MpcSolver] = None) -> Planner:
    """
    Build the planner named by `kind`.

    Args:
        kind: PlannerKind or its string value
        run_config: Source of the planner's settings
        rng: Generator owned by the new planner
        solver: MPC for the expert planner; built from run_config if omitted

    Returns:
        Planner: A fresh planner instance
    """
    kind = PlannerKind(kind)
    if kind == PlannerKind.GREEDY:
        return GreedyPlanner(run_config.greedy, rng)
    if kind == PlannerKind.MCTS:
        return MctsPlanner(run_config.mcts, rng, robot_radius=run_config.mpc.robot_radius)
    return ExpertPlanner(
        solver or MpcSolver.from_run_config(run_config),
        run_config.greedy,
        rng,
        delta_max=run_config.episode.delta_max,
    )
