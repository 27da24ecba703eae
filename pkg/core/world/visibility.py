"""
Line-of-sight and visible-cell computation for the omnidirectional,
range-limited target sensor.
"""
from typing import Sequence, Set

import numpy as np

from core.world.geometry import CellIndex, segments_cross_rect
from core.world.world_map import WorldMap, mask_to_cells


def line_of_sight(p: Sequence[float], q: Sequence[float], world: WorldMap) -> bool:
    """True iff segment pq does not pass through the interior of any obstacle."""
    target = np.asarray([q], dtype=float)
    return not any(segments_cross_rect(p, target, rect)[0] for rect in world.obstacles)


def visible_mask(world: WorldMap, position: Sequence[float], d_max: float) -> np.ndarray:
    """
    Boolean grid of the cells seen from `position`.

    A cell is visible when it is free, its center lies within d_max (inclusive)
    and the segment from `position` to the center is unobstructed.

    Raises:
        OutOfBounds, InObstacle: If position is not in free space
    """
    world.require_free(position)
    xs, ys = world.cell_centers
    in_range = world.free_mask & ((xs - position[0]) ** 2 + (ys - position[1]) ** 2 <= d_max * d_max)
    rows, cols = np.nonzero(in_range)
    if len(rows) == 0 or not world.obstacles:
        return in_range
    targets = np.column_stack((xs[rows, cols], ys[rows, cols]))
    blocked = np.zeros(len(rows), dtype=bool)
    for rect in world.obstacles:
        # Skip obstacles entirely out of sensor range
        if rect.distance(position) > d_max:
            continue
        blocked |= segments_cross_rect(position, targets, rect)
    mask = np.zeros(world.shape, dtype=bool)
    mask[rows[~blocked], cols[~blocked]] = True
    return mask


def visible_cells(world: WorldMap, position: Sequence[float], d_max: float) -> Set[CellIndex]:
    """The visible set I_t as a set of cell indices."""
    return mask_to_cells(visible_mask(world, position, d_max))
