"""
Viewpoint planners: greedy next-best view, MCTS over motion primitives, the
MPC-refined expert, and the policy-observation builder.
"""
from core.planners.base import Planner, PlanningContext, ViewpointAction, clip_action
from core.planners.greedy import GreedyPlanner, greedy_next_best_view
from core.planners.mcts import MctsPlanner, TreeNode, mcts_plan, primitive_rollout
from core.planners.expert import ExpertPlanner, expert_viewpoint
from core.planners.observation import PolicyObservation, build_policy_observation, extract_local_grid
from core.planners.policy import CallablePolicyPlanner
from core.planners.factory import create_planner

__all__ = [
    "Planner",
    "PlanningContext",
    "ViewpointAction",
    "clip_action",
    "GreedyPlanner",
    "greedy_next_best_view",
    "MctsPlanner",
    "TreeNode",
    "mcts_plan",
    "primitive_rollout",
    "ExpertPlanner",
    "expert_viewpoint",
    "PolicyObservation",
    "build_policy_observation",
    "extract_local_grid",
    "CallablePolicyPlanner",
    "create_planner",
]
