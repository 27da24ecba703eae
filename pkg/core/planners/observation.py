"""
Policy observation s_t = [H_t, X_t, O_t, x_t]: the entropy map, a one-hot
robot indicator, an egocentric obstacle grid and the raw robot state.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.belief.belief_map import BeliefMap, entropy_map
from core.dynamics.unicycle import RobotState
from core.world.geometry import point_in_rects
from core.world.world_map import WorldMap


@dataclass(frozen=True)
class PolicyObservation:
    entropy_map: np.ndarray
    indicator: np.ndarray
    local_grid: np.ndarray
    robot_state: RobotState


def local_offsets(m: int, cell_size: float) -> np.ndarray:
    """Symmetric lattice (i - (m-1)/2) * cell_size, i = 0..m-1."""
    return (np.arange(m) - (m - 1) / 2.0) * cell_size


def extract_local_grid(world: WorldMap, state: RobotState, m: int, cell_size: Optional[float] = None) -> np.ndarray:
    """
    m x m binary obstacle grid centered on the robot and aligned with its heading.

    Row r and column c sample the robot-frame point (offset[c], offset[r]),
    rotated by psi and translated to the robot position. Points outside the
    map count as occupied.
    """
    if m < 1:
        raise ValueError(f"local grid size must be >= 1, got {m}")
    cell_size = cell_size if cell_size is not None else world.resolution_m
    if cell_size <= 0:
        raise ValueError(f"cell size must be positive, got {cell_size}")
    offsets = local_offsets(m, cell_size)
    lx, ly = np.meshgrid(offsets, offsets)
    cos_psi, sin_psi = math.cos(state.psi), math.sin(state.psi)
    wx = state.x + cos_psi * lx - sin_psi * ly
    wy = state.y + sin_psi * lx + cos_psi * ly
    outside = (wx < 0.0) | (wx > world.width_m) | (wy < 0.0) | (wy > world.height_m)
    return outside | point_in_rects(wx, wy, world.obstacles)


def robot_indicator(world: WorldMap, state: RobotState) -> np.ndarray:
    """One-hot grid marking the robot's cell."""
    grid = np.zeros(world.shape, dtype=np.uint8)
    grid[world.point_to_cell(state.position)] = 1
    return grid


def build_policy_observation(belief: BeliefMap, world: WorldMap, state: RobotState, m: int = 32,
                             cell_size: Optional[float] = None) -> PolicyObservation:
    world.require_free(state.position)
    return PolicyObservation(
        entropy_map=entropy_map(belief, world),
        indicator=robot_indicator(world, state),
        local_grid=extract_local_grid(world, state, m, cell_size),
        robot_state=state,
    )
