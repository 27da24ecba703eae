"""
Linearized collision constraints: one half-plane per nearby obstacle, taken at
the closest point of the obstacle boundary.
"""
import math
from typing import List, Sequence

from core.world.geometry import LinearConstraint, RectObstacle
from core.world.world_map import WorldMap


def _interior_normal(rect: RectObstacle, position: Sequence[float]) -> LinearConstraint:
    # Position inside the rectangle: use the face with the smallest penetration
    faces = [
        (position[0] - rect.xmin, (1.0, 0.0), rect.xmin),
        (rect.xmax - position[0], (-1.0, 0.0), -rect.xmax),
        (position[1] - rect.ymin, (0.0, 1.0), rect.ymin),
        (rect.ymax - position[1], (0.0, -1.0), -rect.ymax),
    ]
    _, normal, offset = min(faces, key=lambda face: face[0])
    return LinearConstraint(normal, offset)


def obstacle_constraint(rect: RectObstacle, position: Sequence[float]) -> LinearConstraint:
    """
    Half-plane n^T p <= b separating `position` from `rect`.

    n points from the position to the closest boundary point p_o (along the
    face normal on an edge, along position -> corner at a corner) and
    b = n^T p_o, so the signed distance b - n^T position equals the Euclidean
    distance to the rectangle.
    """
    closest = rect.closest_point(position)
    dx, dy = closest[0] - position[0], closest[1] - position[1]
    dist = math.hypot(dx, dy)
    if dist < 1e-12:
        return _interior_normal(rect, position)
    normal = (dx / dist, dy / dist)
    return LinearConstraint(normal, normal[0] * closest[0] + normal[1] * closest[1])


def closest_obstacle_constraints(world: WorldMap, position: Sequence[float], n_obs: int) -> List[LinearConstraint]:
    """
    Constraints for the n_obs obstacles nearest to `position` (ties by obstacle order).

    Returns fewer constraints when the map has fewer obstacles.
    """
    if n_obs <= 0 or not world.obstacles:
        return []
    ranked = sorted(range(len(world.obstacles)), key=lambda i: (world.obstacles[i].distance(position), i))
    return [obstacle_constraint(world.obstacles[i], position) for i in ranked[:n_obs]]


def boundary_constraints(world: WorldMap) -> List[LinearConstraint]:
    """The four map edges as half-planes in the same convention."""
    return [
        LinearConstraint((-1.0, 0.0), 0.0),
        LinearConstraint((1.0, 0.0), world.width_m),
        LinearConstraint((0.0, -1.0), 0.0),
        LinearConstraint((0.0, 1.0), world.height_m),
    ]
