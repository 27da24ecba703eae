"""
Random environment generation with connectivity rejection, target sampling and
start-position sampling.
"""
import logging
from typing import List, Optional

import numpy as np
from scipy import ndimage

from core.config.enums import EnvironmentKind
from core.config.run_config import WorldGenConfig
from core.world.geometry import RectObstacle, WorldPoint
from core.world.world_map import GroundTruthTargets, WorldMap
from core.utils.exceptions import GenerationExhausted

logger = logging.getLogger(__name__)

# 4-connectivity: the robot moves between edge-adjacent cells
_FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)

WALL_HALF_THICKNESS = 0.25


def reachable_mask(world: WorldMap, start: WorldPoint) -> np.ndarray:
    """Flood fill over free cells from the cell containing start."""
    labels, _ = ndimage.label(world.free_mask, structure=_FOUR_CONNECTED)
    cell = world.point_to_cell(start)
    label = labels[cell.row, cell.col]
    if label == 0:
        return np.zeros(world.shape, dtype=bool)
    return labels == label


def is_connected(world: WorldMap, start: Optional[WorldPoint] = None) -> bool:
    """
    True if a flood fill from `start` reaches every free cell.

    Without a start the fill begins at the first free cell; a map with no
    free cells is not connected.
    """
    free = world.free_mask
    if not free.any():
        return False
    if start is None:
        row, col = np.argwhere(free)[0]
        start = world.cell_center((int(row), int(col)))
    return bool(np.array_equal(reachable_mask(world, start), free))


def sample_start_position(world: WorldMap, rng: np.random.Generator, clearance: float) -> WorldPoint:
    """
    Uniformly sample a free cell center whose clearance is at least `clearance`.

    Raises:
        GenerationExhausted: If no cell satisfies the clearance
    """
    candidates = np.argwhere(world.free_mask & (world.clearance_grid >= clearance))
    if len(candidates) == 0:
        raise GenerationExhausted(f"no free cell with clearance >= {clearance} m")
    row, col = candidates[rng.integers(len(candidates))]
    return world.cell_center((int(row), int(col)))


def _sample_obstacle(rng: np.random.Generator, config: WorldGenConfig) -> RectObstacle:
    hx, hy = rng.uniform(config.half_extent_min_m, config.half_extent_max_m, size=2)
    cx = rng.uniform(hx, config.width_m - hx)
    cy = rng.uniform(hy, config.height_m - hy)
    return RectObstacle(WorldPoint(cx, cy), (hx, hy))


def _finalize(obstacles: List[RectObstacle], rng: np.random.Generator, config: WorldGenConfig,
              start_clearance: float, provenance: dict) -> Optional[WorldMap]:
    """Build the candidate map; None when it fails connectivity or start sampling."""
    candidate = WorldMap(config.width_m, config.height_m, config.resolution_m, tuple(obstacles))
    if candidate.n_free == 0 or not is_connected(candidate):
        return None
    try:
        start = sample_start_position(candidate, rng, start_clearance)
    except GenerationExhausted:
        return None
    return WorldMap(
        config.width_m, config.height_m, config.resolution_m, tuple(obstacles),
        start=start, provenance=provenance,
    )


def generate_random_environment(seed: int, n_obstacles: int, gen_config: Optional[WorldGenConfig] = None,
                                start_clearance: float = 0.5) -> WorldMap:
    """
    Sample `n_obstacles` random rectangles, rejecting layouts that split the free space.

    Args:
        seed: RNG seed; identical arguments give an identical map
        n_obstacles: Number of rectangles (>= 0)
        gen_config: Map size, resolution and obstacle size ranges
        start_clearance: Minimum distance of the start position to obstacles and edges

    Returns:
        WorldMap: A connected map with a designated start position

    Raises:
        GenerationExhausted: After gen_config.max_attempts rejected layouts
    """
    config = gen_config or WorldGenConfig()
    if n_obstacles < 0:
        raise ValueError(f"n_obstacles must be >= 0, got {n_obstacles}")
    rng = np.random.default_rng(seed)
    provenance = {
        "seed": seed,
        "n_obstacles": n_obstacles,
        "kind": EnvironmentKind.RANDOM.value,
        "gen_config": config.model_dump(mode="json"),
    }
    for attempt in range(1, config.max_attempts + 1):
        obstacles = [_sample_obstacle(rng, config) for _ in range(n_obstacles)]
        world = _finalize(obstacles, rng, config, start_clearance, provenance)
        if world is not None:
            logger.debug(f"Generated map seed={seed} n_obstacles={n_obstacles} after {attempt} attempt(s)")
            world.provenance["attempts"] = attempt
            return world
        logger.debug(f"Rejected layout {attempt} for seed={seed}")
    raise GenerationExhausted(
        f"no connected layout with {n_obstacles} obstacles after {config.max_attempts} attempts",
        attempts=config.max_attempts,
    )


def _snap(value: float, resolution: float) -> float:
    return round(value / resolution) * resolution


def _room_walls(x0: float, y0: float, side: float, door_wall: int, door_width: float) -> List[RectObstacle]:
    """Four walls of a square room with a centered doorway in wall `door_wall` (0=S, 1=E, 2=N, 3=W)."""
    t = WALL_HALF_THICKNESS
    x1, y1 = x0 + side, y0 + side
    spans = {
        0: ("h", y0, x0, x1),
        1: ("v", x1, y0, y1),
        2: ("h", y1, x0, x1),
        3: ("v", x0, y0, y1),
    }
    walls = []
    for index, (orientation, fixed, lo, hi) in spans.items():
        pieces = [(lo, hi)]
        if index == door_wall:
            mid = (lo + hi) / 2.0
            pieces = [(lo, mid - door_width / 2.0), (mid + door_width / 2.0, hi)]
        for a, b in pieces:
            if orientation == "h":
                walls.append(RectObstacle.from_bounds(a - t, fixed - t, b + t, fixed + t))
            else:
                walls.append(RectObstacle.from_bounds(fixed - t, a - t, fixed + t, b + t))
    return walls


def generate_structured_environment(seed: int, gen_config: Optional[WorldGenConfig] = None,
                                    start_clearance: float = 0.5) -> WorldMap:
    """
    Room-like layout: a square room with one doorway plus a dead-end corridor
    running in from the top edge.

    Same determinism and connectivity guarantees as the random generator.
    """
    config = gen_config or WorldGenConfig()
    rng = np.random.default_rng(seed)
    res = config.resolution_m
    extent = min(config.width_m, config.height_m)
    side = _snap(0.35 * extent, res)
    door_width = max(2.0, 4 * res)
    corridor_gap = max(2.0, 4 * res)
    corridor_length = _snap(0.4 * config.height_m, res)
    margin = 1.0 + WALL_HALF_THICKNESS
    provenance = {
        "seed": seed,
        "n_obstacles": None,
        "kind": EnvironmentKind.STRUCTURED.value,
        "gen_config": config.model_dump(mode="json"),
    }
    for attempt in range(1, config.max_attempts + 1):
        x0 = _snap(rng.uniform(margin, config.width_m - side - margin), res)
        y0 = _snap(rng.uniform(margin, config.height_m - side - margin), res)
        room = _room_walls(x0, y0, side, int(rng.integers(4)), door_width)
        cx = _snap(rng.uniform(margin, config.width_m - corridor_gap - margin), res)
        t = WALL_HALF_THICKNESS
        top = config.height_m
        corridor = [
            RectObstacle.from_bounds(cx - t, top - corridor_length, cx + t, top),
            RectObstacle.from_bounds(cx + corridor_gap - t, top - corridor_length, cx + corridor_gap + t, top),
        ]
        room_box = RectObstacle.from_bounds(x0 - t, y0 - t, x0 + side + t, y0 + side + t)
        if any(wall.overlaps(room_box, margin=2 * margin) for wall in corridor):
            continue
        world = _finalize(room + corridor, rng, config, start_clearance, provenance)
        if world is not None:
            world.provenance["attempts"] = attempt
            logger.debug(f"Generated structured map seed={seed} after {attempt} attempt(s)")
            return world
    raise GenerationExhausted(
        f"no structured layout fits after {config.max_attempts} attempts", attempts=config.max_attempts
    )


def generate_environment(seed: int, n_obstacles: int, gen_config: Optional[WorldGenConfig] = None,
                         start_clearance: float = 0.5) -> WorldMap:
    """Dispatch on gen_config.kind."""
    config = gen_config or WorldGenConfig()
    if config.kind == EnvironmentKind.STRUCTURED:
        return generate_structured_environment(seed, config, start_clearance)
    return generate_random_environment(seed, n_obstacles, config, start_clearance)


def sample_targets(world: WorldMap, seed: int, density: float) -> GroundTruthTargets:
    """
    Place a target in each free cell independently with probability `density`.

    Obstacle cells never carry a target.
    """
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must lie in [0, 1], got {density}")
    rng = np.random.default_rng(seed)
    draws = rng.random(world.shape) < density
    return GroundTruthTargets(draws & world.free_mask)
