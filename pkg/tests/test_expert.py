import numpy as np

from core.belief.belief_map import init_uniform
from core.belief.sensor import SensorModel
from core.config.enums import PlannerKind
from core.config.run_config import GreedyConfig
from core.dynamics.unicycle import RobotState
from core.mpc.solver import MpcSolver
from core.planners.base import PlanningContext
from core.planners.expert import ExpertPlanner, expert_viewpoint
from core.planners.factory import create_planner
from core.planners.greedy import GreedyPlanner
from core.planners.mcts import MctsPlanner
from core.planners.policy import CallablePolicyPlanner


def test_expert_action_stays_in_the_square(wall_world, rng):
    state = RobotState(2.25, 10.25)
    action = expert_viewpoint(init_uniform(wall_world), wall_world, state, MpcSolver(), SensorModel(), rng,
                              GreedyConfig(n_candidates=10), delta_max=1.0)
    assert abs(action.delta[0]) <= 1.0 and abs(action.delta[1]) <= 1.0


def test_expert_planner_returns_an_mpc_reachable_point(empty_world, rng):
    planner = ExpertPlanner(MpcSolver(), GreedyConfig(n_candidates=10), rng)
    state = RobotState(10.25, 10.25)
    target = planner.recommend(PlanningContext(init_uniform(empty_world), empty_world, state, SensorModel(), 5.0))
    # 1.5 s horizon from rest with a_max = 2 covers at most 2.25 m
    assert np.hypot(target.x - state.x, target.y - state.y) <= 2.25 + 1e-9


def test_policy_planner_clips_its_output(empty_world):
    seen = []

    def policy(observation):
        seen.append(observation)
        return (10.0, -10.0)

    planner = CallablePolicyPlanner(policy, delta_max=4.0, local_grid_size=8)
    state = RobotState(10.0, 10.0)
    target = planner.recommend(PlanningContext(init_uniform(empty_world), empty_world, state, SensorModel(), 5.0))
    assert target == (14.0, 6.0)
    assert seen[0].local_grid.shape == (8, 8)


def test_factory(run_config, rng):
    assert isinstance(create_planner("greedy", run_config, rng), GreedyPlanner)
    mcts = create_planner(PlannerKind.MCTS, run_config, rng)
    assert isinstance(mcts, MctsPlanner)
    assert mcts.robot_radius == run_config.mpc.robot_radius
    solver = MpcSolver()
    expert = create_planner("expert", run_config, rng, solver=solver)
    assert isinstance(expert, ExpertPlanner) and expert.solver is solver
