import numpy as np
import pytest

from core.config.run_config import RunConfig, build_run_config
from core.world.geometry import RectObstacle, WorldPoint
from core.world.world_map import WorldMap


@pytest.fixture
def empty_world():
    return WorldMap(20.0, 20.0, 0.5, (), start=WorldPoint(10.25, 10.25))


@pytest.fixture
def wall_world():
    # Vertical wall x in [5, 6], y in [4, 16]
    return WorldMap(20.0, 20.0, 0.5, (RectObstacle.from_bounds(5.0, 4.0, 6.0, 16.0),), start=WorldPoint(2.25, 10.25))


@pytest.fixture
def run_config():
    return RunConfig()


@pytest.fixture
def fast_config():
    """Small search budgets so closed-loop tests stay quick."""
    return build_run_config(overrides=[{
        "mpc": {"solver": {"max_outer_iterations": 3, "max_inner_iterations": 30}},
        "greedy": {"n_candidates": 10},
        "mcts": {"n_tree": 12, "n_sim": 2, "depth": 2},
        "episode": {"t_max": 10},
    }])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
