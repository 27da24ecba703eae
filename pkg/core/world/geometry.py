"""
Planar geometry primitives: points, cell indices, axis-aligned rectangles and
half-plane constraints, plus the vectorized segment/rectangle tests used for
visibility.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Tuple

import numpy as np

# Tolerance for parallel-segment and grazing-contact decisions
EPS = 1e-12


class WorldPoint(NamedTuple):
    x: float
    y: float


class CellIndex(NamedTuple):
    row: int
    col: int


@dataclass(frozen=True)
class RectObstacle:
    """Axis-aligned rectangle given by its center and half extents (meters)."""
    center: WorldPoint
    half_extents: Tuple[float, float]

    def __post_init__(self):
        hx, hy = self.half_extents
        if not (hx > 0 and hy > 0):
            raise ValueError(f"half extents must be positive, got {self.half_extents}")
        object.__setattr__(self, "center", WorldPoint(float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "half_extents", (float(hx), float(hy)))

    @property
    def xmin(self) -> float:
        return self.center.x - self.half_extents[0]

    @property
    def xmax(self) -> float:
        return self.center.x + self.half_extents[0]

    @property
    def ymin(self) -> float:
        return self.center.y - self.half_extents[1]

    @property
    def ymax(self) -> float:
        return self.center.y + self.half_extents[1]

    @classmethod
    def from_bounds(cls, xmin: float, ymin: float, xmax: float, ymax: float) -> "RectObstacle":
        return cls(
            WorldPoint((xmin + xmax) / 2.0, (ymin + ymax) / 2.0),
            ((xmax - xmin) / 2.0, (ymax - ymin) / 2.0),
        )

    def contains(self, point: Sequence[float]) -> bool:
        """Closed containment: boundary points count as inside."""
        return self.xmin <= point[0] <= self.xmax and self.ymin <= point[1] <= self.ymax

    def closest_point(self, point: Sequence[float]) -> WorldPoint:
        return WorldPoint(
            min(max(point[0], self.xmin), self.xmax),
            min(max(point[1], self.ymin), self.ymax),
        )

    def distance(self, point: Sequence[float]) -> float:
        """Euclidean distance from point to the rectangle (0 inside)."""
        dx = max(self.xmin - point[0], 0.0, point[0] - self.xmax)
        dy = max(self.ymin - point[1], 0.0, point[1] - self.ymax)
        return math.hypot(dx, dy)

    def overlaps(self, other: "RectObstacle", margin: float = 0.0) -> bool:
        return not (
            self.xmax + margin <= other.xmin
            or other.xmax + margin <= self.xmin
            or self.ymax + margin <= other.ymin
            or other.ymax + margin <= self.ymin
        )

    def to_dict(self) -> dict:
        return {"center": list(self.center), "half_extents": list(self.half_extents)}

    @classmethod
    def from_dict(cls, data: dict) -> "RectObstacle":
        return cls(WorldPoint(*data["center"]), tuple(data["half_extents"]))


@dataclass(frozen=True)
class LinearConstraint:
    """
    Half-plane n^T p <= b - r around an obstacle.

    `normal` is the unit vector from the robot towards the closest obstacle
    point p_o and `offset` is b = n^T p_o, so `offset - n^T p` is the signed
    distance of p from the supporting line (positive on the free side).
    """
    normal: Tuple[float, float]
    offset: float

    def value(self, point: Sequence[float]) -> float:
        return self.normal[0] * point[0] + self.normal[1] * point[1]

    def signed_distance(self, point: Sequence[float]) -> float:
        return self.offset - self.value(point)

    def residual(self, point: Sequence[float], radius: float) -> float:
        """n^T p - (b - r); positive means violated."""
        return self.value(point) - (self.offset - radius)

    def normal_norm(self) -> float:
        return math.hypot(self.normal[0], self.normal[1])


def point_in_rects(xs: np.ndarray, ys: np.ndarray, obstacles: Sequence[RectObstacle]) -> np.ndarray:
    """Boolean array: closed containment of each (x, y) in any rectangle."""
    inside = np.zeros(np.broadcast(xs, ys).shape, dtype=bool)
    for rect in obstacles:
        inside |= (xs >= rect.xmin) & (xs <= rect.xmax) & (ys >= rect.ymin) & (ys <= rect.ymax)
    return inside


def distance_to_rects(xs: np.ndarray, ys: np.ndarray, obstacles: Sequence[RectObstacle]) -> np.ndarray:
    """Distance from each point to the nearest rectangle; +inf without obstacles."""
    best = np.full(np.broadcast(xs, ys).shape, np.inf)
    for rect in obstacles:
        dx = np.maximum(np.maximum(rect.xmin - xs, 0.0), xs - rect.xmax)
        dy = np.maximum(np.maximum(rect.ymin - ys, 0.0), ys - rect.ymax)
        best = np.minimum(best, np.hypot(dx, dy))
    return best


def segments_cross_rect(origin: Sequence[float], targets: np.ndarray, rect: RectObstacle) -> np.ndarray:
    """
    Slab test: does each segment origin->target pass through the open interior of rect?

    Touching an edge or grazing a corner does not count as crossing.

    Args:
        origin: Segment start (x, y)
        targets: (k, 2) array of segment ends
        rect: The rectangle

    Returns:
        np.ndarray: (k,) boolean array
    """
    targets = np.asarray(targets, dtype=float).reshape(-1, 2)
    t_lo = np.zeros(len(targets))
    t_hi = np.ones(len(targets))
    blocked_possible = np.ones(len(targets), dtype=bool)
    for axis, (lo, hi) in enumerate(((rect.xmin, rect.xmax), (rect.ymin, rect.ymax))):
        p = origin[axis]
        d = targets[:, axis] - p
        parallel = np.abs(d) < EPS
        # A segment parallel to this slab only meets the interior if it runs strictly inside it
        blocked_possible &= ~parallel | ((p > lo) & (p < hi))
        with np.errstate(divide="ignore", invalid="ignore"):
            t1 = (lo - p) / d
            t2 = (hi - p) / d
        t_near = np.where(parallel, -np.inf, np.minimum(t1, t2))
        t_far = np.where(parallel, np.inf, np.maximum(t1, t2))
        t_lo = np.maximum(t_lo, t_near)
        t_hi = np.minimum(t_hi, t_far)
    return blocked_possible & (t_hi - t_lo > EPS)

