"""
Ground-truth world: geometry, maps, generation, visibility and constraints.
"""
from core.world.geometry import CellIndex, LinearConstraint, RectObstacle, WorldPoint
from core.world.world_map import GroundTruthTargets, WorldMap, load_world, save_world
from core.world.generation import (
    generate_environment,
    generate_random_environment,
    generate_structured_environment,
    sample_start_position,
    sample_targets,
)
from core.world.visibility import line_of_sight, visible_cells, visible_mask
from core.world.constraints import boundary_constraints, closest_obstacle_constraints

__all__ = [
    "CellIndex",
    "LinearConstraint",
    "RectObstacle",
    "WorldPoint",
    "GroundTruthTargets",
    "WorldMap",
    "load_world",
    "save_world",
    "generate_environment",
    "generate_random_environment",
    "generate_structured_environment",
    "sample_start_position",
    "sample_targets",
    "line_of_sight",
    "visible_cells",
    "visible_mask",
    "boundary_constraints",
    "closest_obstacle_constraints",
]
