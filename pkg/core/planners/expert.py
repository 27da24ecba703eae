"""
Expert viewpoint: the greedy next-best view refined through the MPC, i.e. the
terminal position the controller would actually reach.
"""
import logging
from typing import Optional

import numpy as np

from core.belief.belief_map import BeliefMap
from core.belief.sensor import SensorModel
from core.config.run_config import GreedyConfig
from core.dynamics.unicycle import RobotState
from core.mpc.solver import MpcSolver, build_constraints
from core.planners.base import Planner, PlanningContext, ViewpointAction, clip_action
from core.planners.greedy import greedy_next_best_view
from core.world.geometry import WorldPoint
from core.world.world_map import WorldMap

logger = logging.getLogger(__name__)


def expert_viewpoint(belief: BeliefMap, world: WorldMap, state: RobotState, solver: MpcSolver,
                     sensor: SensorModel, rng: np.random.Generator, greedy_config: Optional[GreedyConfig] = None,
                     d_max: float = 5.0, delta_max: float = 4.0) -> ViewpointAction:
    """
    a* = p*_N - p_t, clipped to the action square.

    Args:
        belief: Current target belief
        world: Map for candidate validity and MPC constraints
        state: Current robot state
        solver: MPC used to reach the greedy viewpoint
        sensor: Channel used to score candidates
        rng: Greedy candidate sampler
        greedy_config: Candidate count and sampling half-width
        d_max: Sensor range
        delta_max: Action square half-width

    Returns:
        ViewpointAction: Relative expert viewpoint
    """
    target = greedy_next_best_view(belief, world, state.position, sensor, greedy_config, rng, d_max)
    solution = solver.solve(state, target, build_constraints(world, state.position, solver.config))
    if not solution.converged:
        logger.debug(f"Expert MPC ended with status {solution.status.value}; using its best iterate")
    terminal = solution.terminal_position
    return clip_action((terminal.x - state.x, terminal.y - state.y), delta_max)


class ExpertPlanner(Planner):
    name = "expert"

    def __init__(self, solver: MpcSolver, greedy_config: Optional[GreedyConfig] = None,
                 rng: Optional[np.random.Generator] = None, delta_max: float = 4.0):
        self.solver = solver
        self.greedy_config = greedy_config or GreedyConfig()
        self.rng = rng if rng is not None else np.random.default_rng()
        self.delta_max = delta_max

    def recommend(self, context: PlanningContext) -> WorldPoint:
        action = expert_viewpoint(context.belief, context.world, context.state, self.solver, context.sensor,
                                  self.rng, self.greedy_config, context.d_max, self.delta_max)
        return action.apply(context.position)
