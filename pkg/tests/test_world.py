import math

import numpy as np
import pytest

from core.config.run_config import WorldGenConfig
from core.utils.exceptions import GenerationExhausted, InObstacle, OutOfBounds
from core.world.generation import (
    generate_environment,
    generate_random_environment,
    generate_structured_environment,
    is_connected,
    reachable_mask,
    sample_targets,
)
from core.world.geometry import RectObstacle, WorldPoint
from core.world.world_map import WorldMap, load_world, save_world


def test_grid_shape(empty_world):
    assert empty_world.shape == (40, 40)
    assert empty_world.n_free == 1600


def test_cell_conversions_stay_within_half_a_cell(empty_world, rng):
    half = empty_world.resolution_m / 2.0
    for point in rng.uniform(0.0, 20.0, size=(200, 2)):
        center = empty_world.cell_center(empty_world.point_to_cell(point))
        assert abs(center.x - point[0]) <= half + 1e-12
        assert abs(center.y - point[1]) <= half + 1e-12


def test_far_edge_belongs_to_last_cell(empty_world):
    assert empty_world.point_to_cell((20.0, 20.0)) == (39, 39)


def test_rows_index_y(empty_world):
    assert empty_world.point_to_cell((0.2, 7.3)) == (14, 0)


def test_require_free(wall_world):
    wall_world.require_free((2.0, 2.0))
    with pytest.raises(OutOfBounds):
        wall_world.require_free((-0.1, 2.0))
    with pytest.raises(InObstacle):
        wall_world.require_free((5.5, 10.0))
    # closed containment: the boundary is obstacle
    with pytest.raises(InObstacle):
        wall_world.require_free((5.0, 10.0))


def test_rect_distance_matches_boundary_sampling(rng):
    rect = RectObstacle(WorldPoint(10.0, 10.0), (2.0, 1.0))
    t = np.linspace(0.0, 1.0, 4001)
    boundary = np.concatenate([
        np.column_stack((8.0 + 4.0 * t, np.full_like(t, 9.0))),
        np.column_stack((8.0 + 4.0 * t, np.full_like(t, 11.0))),
        np.column_stack((np.full_like(t, 8.0), 9.0 + 2.0 * t)),
        np.column_stack((np.full_like(t, 12.0), 9.0 + 2.0 * t)),
    ])
    for _ in range(50):
        point = rng.uniform(0.0, 20.0, size=2)
        if rect.contains(point):
            assert rect.distance(point) == 0.0
            continue
        sampled = np.hypot(*(boundary - point).T).min()
        assert rect.distance(point) == pytest.approx(sampled, abs=1e-3)


def test_clearance_includes_map_edges(wall_world):
    assert wall_world.clearance((1.0, 10.0)) == pytest.approx(1.0)
    assert wall_world.clearance((4.0, 10.0)) == pytest.approx(1.0)
    assert wall_world.obstacle_distance((4.0, 10.0)) == pytest.approx(1.0)


def test_generation_is_deterministic():
    a = generate_random_environment(7, 3)
    b = generate_random_environment(7, 3)
    c = generate_random_environment(8, 3)
    assert a == b
    assert a.fingerprint() == b.fingerprint()
    assert a.fingerprint() != c.fingerprint()


@pytest.mark.parametrize("seed", range(6))
def test_generated_maps_are_connected_with_safe_start(seed):
    world = generate_random_environment(seed, 3, start_clearance=0.5)
    assert len(world.obstacles) == 3
    assert is_connected(world)
    assert np.array_equal(reachable_mask(world, world.start), world.free_mask)
    assert world.is_free_point(world.start)
    assert world.clearance(world.start) >= 0.5
    for rect in world.obstacles:
        assert 0.0 <= rect.xmin and rect.xmax <= world.width_m
        assert 0.0 <= rect.ymin and rect.ymax <= world.height_m


def test_zero_obstacles():
    world = generate_random_environment(0, 0)
    assert world.obstacles == ()
    assert world.start is not None


def test_negative_obstacle_count():
    with pytest.raises(ValueError):
        generate_random_environment(0, -1)


def test_generation_gives_up_after_max_attempts():
    with pytest.raises(GenerationExhausted) as excinfo:
        generate_random_environment(0, 1, WorldGenConfig(max_attempts=3), start_clearance=100.0)
    assert excinfo.value.attempts == 3


def test_structured_environment():
    world = generate_environment(3, 0, WorldGenConfig(kind="structured"))
    assert world.provenance["kind"] == "structured"
    # three closed walls, a split wall and the two corridor walls
    assert len(world.obstacles) == 7
    assert is_connected(world)
    assert generate_structured_environment(3).fingerprint() == world.fingerprint()


def test_target_density_within_binomial_bound(empty_world):
    targets = sample_targets(empty_world, 11, 0.1)
    n = empty_world.n_free
    sigma = math.sqrt(n * 0.1 * 0.9)
    assert abs(targets.count - 0.1 * n) <= 3 * sigma


def test_targets_only_in_free_cells(wall_world):
    targets = sample_targets(wall_world, 0, 1.0)
    assert np.array_equal(targets.occupied, wall_world.free_mask)


def test_target_density_validated(empty_world):
    with pytest.raises(ValueError):
        sample_targets(empty_world, 0, 1.5)


def test_save_and_load(tmp_path):
    world = generate_random_environment(5, 2)
    targets = sample_targets(world, 5, 0.1)
    path = tmp_path / "map.json"
    save_world(world, str(path), targets)
    loaded, loaded_targets = load_world(str(path))
    assert loaded.fingerprint() == world.fingerprint()
    assert loaded.start == world.start
    assert np.array_equal(loaded_targets.occupied, targets.occupied)


def test_fingerprint_ignores_provenance():
    a = WorldMap(10.0, 10.0, 0.5, (), start=WorldPoint(1.0, 1.0), provenance={"seed": 1})
    b = WorldMap(10.0, 10.0, 0.5, (), start=WorldPoint(1.0, 1.0), provenance={"seed": 2})
    assert a.fingerprint() == b.fingerprint()


def test_obstacle_outside_bounds_rejected():
    with pytest.raises(ValueError):
        WorldMap(10.0, 10.0, 0.5, (RectObstacle.from_bounds(8.0, 8.0, 11.0, 9.0),))


def test_flood_fill_stops_at_a_dividing_wall():
    world = WorldMap(20.0, 20.0, 0.5, (RectObstacle.from_bounds(9.0, 0.0, 10.0, 20.0),))
    left = reachable_mask(world, WorldPoint(2.25, 10.25))
    xs, _ = world.cell_centers
    assert np.array_equal(left, world.free_mask & (xs < 9.0))
    assert not is_connected(world)
    assert not is_connected(world, WorldPoint(15.25, 3.25))
    assert not reachable_mask(world, WorldPoint(9.5, 10.0)).any()


def test_flood_fill_goes_around_a_partial_wall(wall_world):
    assert is_connected(wall_world, wall_world.start)
    assert np.array_equal(reachable_mask(wall_world, wall_world.start), wall_world.free_mask)
