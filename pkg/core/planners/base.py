"""
Common planner interface and the viewpoint action space.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Sequence, Tuple

from core.belief.belief_map import BeliefMap
from core.belief.sensor import SensorModel
from core.dynamics.unicycle import RobotState
from core.world.geometry import WorldPoint
from core.world.world_map import WorldMap


@dataclass(frozen=True)
class ViewpointAction:
    """Viewpoint reference relative to the robot position, in meters."""
    delta: Tuple[float, float]

    def apply(self, position: Sequence[float]) -> WorldPoint:
        return WorldPoint(position[0] + self.delta[0], position[1] + self.delta[1])


def clip_action(delta: Sequence[float], delta_max: float) -> ViewpointAction:
    """Component-wise clamp to the square [-delta_max, delta_max]^2."""
    return ViewpointAction((
        min(max(float(delta[0]), -delta_max), delta_max),
        min(max(float(delta[1]), -delta_max), delta_max),
    ))


@dataclass(frozen=True)
class PlanningContext:
    """Everything a planner may look at when recommending a viewpoint."""
    belief: BeliefMap
    world: WorldMap
    state: RobotState
    sensor: SensorModel
    d_max: float

    @property
    def position(self) -> WorldPoint:
        return WorldPoint(self.state.x, self.state.y)


class Planner(ABC):
    """
    Recommends a reference viewpoint p_ref every N_a timesteps.

    Implementations own their random generator, so distinct instances can run
    in parallel.
    """

    name: str = "planner"

    @abstractmethod
    def recommend(self, context: PlanningContext) -> WorldPoint:
        """Return the next reference viewpoint."""
