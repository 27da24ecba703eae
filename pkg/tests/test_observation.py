import math

import numpy as np
import pytest

from core.belief.belief_map import init_uniform
from core.dynamics.unicycle import RobotState
from core.planners.observation import (
    build_policy_observation,
    extract_local_grid,
    local_offsets,
    robot_indicator,
)
from core.utils.exceptions import InObstacle
from core.world.geometry import RectObstacle
from core.world.world_map import WorldMap


def test_offsets_are_symmetric():
    offsets = local_offsets(4, 0.5)
    assert offsets.tolist() == [-0.75, -0.25, 0.25, 0.75]
    assert local_offsets(3, 1.0).tolist() == [-1.0, 0.0, 1.0]


def test_axis_aligned_grid_is_a_crop(wall_world):
    # samples land on cell centers: x = 2.25 .. 5.75, y = 8.25 .. 11.75
    grid = extract_local_grid(wall_world, RobotState(4.0, 10.0, 0.0), 8, 0.5)
    assert np.array_equal(grid, wall_world.obstacle_mask[16:24, 4:12])
    assert grid[:, 6:].all() and not grid[:, :6].any()


def test_grid_turns_with_the_heading(wall_world):
    heading_zero = extract_local_grid(wall_world, RobotState(4.0, 10.0, 0.0), 8, 0.5)
    heading_left = extract_local_grid(wall_world, RobotState(4.0, 10.0, math.pi / 2), 8, 0.5)
    assert np.array_equal(heading_left, heading_zero[:, ::-1].T)


def test_outside_the_map_counts_as_obstacle(empty_world):
    grid = extract_local_grid(empty_world, RobotState(0.75, 10.0, 0.0), 8, 0.5)
    # columns sample x = -1.0, -0.5, 0.0, 0.5, ...
    assert grid[:, :2].all()
    assert not grid[:, 3:].any()


def test_invalid_grid_size(empty_world):
    with pytest.raises(ValueError):
        extract_local_grid(empty_world, RobotState(10.0, 10.0), 0)


def test_indicator_is_one_hot(empty_world):
    indicator = robot_indicator(empty_world, RobotState(3.3, 7.8))
    assert indicator.sum() == 1
    assert indicator[15, 6] == 1


def test_policy_observation(wall_world):
    state = RobotState(2.25, 10.25, 0.3, 1.0, 0.1)
    observation = build_policy_observation(init_uniform(wall_world), wall_world, state, m=16)
    assert observation.entropy_map.shape == wall_world.shape
    assert observation.entropy_map[wall_world.obstacle_mask].sum() == 0.0
    assert observation.local_grid.shape == (16, 16)
    assert observation.robot_state == state
    with pytest.raises(InObstacle):
        build_policy_observation(init_uniform(wall_world), wall_world, RobotState(5.5, 10.0))


@pytest.mark.parametrize("psi", [0.0, 0.3, -2.0])
def test_grid_depends_only_on_the_surroundings(psi):
    here = WorldMap(20.0, 20.0, 0.5, (RectObstacle.from_bounds(8.0, 8.0, 9.0, 12.0),))
    there = WorldMap(20.0, 20.0, 0.5, (RectObstacle.from_bounds(10.0, 9.5, 11.0, 13.5),))
    grid_here = extract_local_grid(here, RobotState(7.0, 10.0, psi), 8)
    grid_there = extract_local_grid(there, RobotState(9.0, 11.5, psi), 8)
    assert grid_here.any()
    assert np.array_equal(grid_here, grid_there)
