"""
Adapter for externally supplied policies (e.g. a trained network).
"""
from typing import Callable, Optional, Sequence

from core.planners.base import Planner, PlanningContext, clip_action
from core.planners.observation import PolicyObservation, build_policy_observation
from core.world.geometry import WorldPoint

PolicyFn = Callable[[PolicyObservation], Sequence[float]]


class CallablePolicyPlanner(Planner):
    """
    Wraps any callable mapping a PolicyObservation to a relative viewpoint delta.

    The delta is clipped to the action square before it is applied.
    """

    name = "policy"

    def __init__(self, policy: PolicyFn, delta_max: float = 4.0, local_grid_size: int = 32,
                 local_cell_size: Optional[float] = None):
        self.policy = policy
        self.delta_max = delta_max
        self.local_grid_size = local_grid_size
        self.local_cell_size = local_cell_size

    def recommend(self, context: PlanningContext) -> WorldPoint:
        observation = build_policy_observation(context.belief, context.world, context.state,
                                               self.local_grid_size, self.local_cell_size)
        action = clip_action(self.policy(observation), self.delta_max)
        return action.apply(context.position)
