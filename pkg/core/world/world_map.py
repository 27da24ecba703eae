"""
Ground-truth environment: map bounds, grid discretization, rectangular
obstacles and the hidden target realization.
"""
import hashlib
import json
import math
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from core.world.geometry import (
    CellIndex,
    RectObstacle,
    WorldPoint,
    distance_to_rects,
    point_in_rects,
)
from core.utils.exceptions import InObstacle, OutOfBounds

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WorldMap:
    """
    Immutable 2D environment spanning [0, width_m] x [0, height_m].

    Rows index y and columns index x; cell (r, c) has its center at
    ((c + 0.5) * resolution, (r + 0.5) * resolution).
    """
    width_m: float
    height_m: float
    resolution_m: float
    obstacles: Tuple[RectObstacle, ...] = ()
    start: Optional[WorldPoint] = None
    # Generator seed and settings, echoed for provenance
    provenance: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not (self.width_m > 0 and self.height_m > 0 and self.resolution_m > 0):
            raise ValueError("width, height and resolution must be positive")
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        for rect in self.obstacles:
            if rect.xmin < 0 or rect.ymin < 0 or rect.xmax > self.width_m or rect.ymax > self.height_m:
                raise ValueError(f"obstacle {rect} leaves the map bounds")
        if self.start is not None:
            object.__setattr__(self, "start", WorldPoint(float(self.start[0]), float(self.start[1])))

    # -- grid -------------------------------------------------------------------

    @property
    def n_rows(self) -> int:
        return int(math.ceil(self.height_m / self.resolution_m - 1e-9))

    @property
    def n_cols(self) -> int:
        return int(math.ceil(self.width_m / self.resolution_m - 1e-9))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def n_cells(self) -> int:
        return self.n_rows * self.n_cols

    @cached_property
    def cell_centers(self) -> Tuple[np.ndarray, np.ndarray]:
        """(xs, ys) grids of cell-center coordinates, each of shape `shape`."""
        cols = (np.arange(self.n_cols) + 0.5) * self.resolution_m
        rows = (np.arange(self.n_rows) + 0.5) * self.resolution_m
        xs, ys = np.meshgrid(cols, rows)
        xs.setflags(write=False)
        ys.setflags(write=False)
        return xs, ys

    @cached_property
    def obstacle_mask(self) -> np.ndarray:
        """True where the cell center lies inside (or on) an obstacle."""
        xs, ys = self.cell_centers
        mask = point_in_rects(xs, ys, self.obstacles)
        mask.setflags(write=False)
        return mask

    @cached_property
    def free_mask(self) -> np.ndarray:
        mask = ~self.obstacle_mask
        mask.setflags(write=False)
        return mask

    @cached_property
    def clearance_grid(self) -> np.ndarray:
        """Per-cell distance from the center to the nearest obstacle or map edge."""
        xs, ys = self.cell_centers
        edge = np.minimum(np.minimum(xs, self.width_m - xs), np.minimum(ys, self.height_m - ys))
        grid = np.minimum(distance_to_rects(xs, ys, self.obstacles), edge)
        grid.setflags(write=False)
        return grid

    @property
    def n_free(self) -> int:
        return int(self.free_mask.sum())

    def point_to_cell(self, point: Sequence[float]) -> CellIndex:
        col = int(math.floor(point[0] / self.resolution_m))
        row = int(math.floor(point[1] / self.resolution_m))
        # x == width_m belongs to the last column
        col = min(max(col, 0), self.n_cols - 1)
        row = min(max(row, 0), self.n_rows - 1)
        return CellIndex(row, col)

    def cell_center(self, cell: Sequence[int]) -> WorldPoint:
        return WorldPoint((cell[1] + 0.5) * self.resolution_m, (cell[0] + 0.5) * self.resolution_m)

    # -- geometry queries -------------------------------------------------------

    def in_bounds(self, point: Sequence[float]) -> bool:
        return 0.0 <= point[0] <= self.width_m and 0.0 <= point[1] <= self.height_m

    def in_obstacle(self, point: Sequence[float]) -> bool:
        return any(rect.contains(point) for rect in self.obstacles)

    def is_free_point(self, point: Sequence[float]) -> bool:
        return self.in_bounds(point) and not self.in_obstacle(point)

    def require_free(self, point: Sequence[float]) -> None:
        """Raise OutOfBounds / InObstacle for positions outside free space."""
        if not self.in_bounds(point):
            raise OutOfBounds(f"position {tuple(point)} is outside the map bounds")
        if self.in_obstacle(point):
            raise InObstacle(f"position {tuple(point)} lies inside an obstacle")

    def obstacle_distance(self, point: Sequence[float]) -> float:
        """Distance to the nearest obstacle (0 inside, +inf on an empty map)."""
        if not self.obstacles:
            return math.inf
        return min(rect.distance(point) for rect in self.obstacles)

    def clearance(self, point: Sequence[float]) -> float:
        """Distance to the nearest obstacle or map edge."""
        edge = min(point[0], self.width_m - point[0], point[1], self.height_m - point[1])
        return min(self.obstacle_distance(point), edge)

    # -- cell sets --------------------------------------------------------------

    def free_cells(self) -> Set[CellIndex]:
        return mask_to_cells(self.free_mask)

    # -- serialization ----------------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        return {
            "width_m": self.width_m,
            "height_m": self.height_m,
            "resolution_m": self.resolution_m,
            "obstacles": [rect.to_dict() for rect in self.obstacles],
            "start": list(self.start) if self.start is not None else None,
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "WorldMap":
        start = data.get("start")
        return cls(
            width_m=float(data["width_m"]),
            height_m=float(data["height_m"]),
            resolution_m=float(data["resolution_m"]),
            obstacles=tuple(RectObstacle.from_dict(o) for o in data.get("obstacles", [])),
            start=WorldPoint(*start) if start is not None else None,
            provenance=dict(data.get("provenance", {})),
        )

    def fingerprint(self) -> str:
        """SHA-256 over the geometry (provenance excluded)."""
        payload = self.to_dict()
        payload.pop("provenance")
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class GroundTruthTargets:
    """Hidden target realization; only free cells can carry a target."""
    occupied: np.ndarray

    def __post_init__(self):
        grid = np.array(self.occupied, dtype=bool)
        grid.setflags(write=False)
        object.__setattr__(self, "occupied", grid)

    @property
    def count(self) -> int:
        return int(self.occupied.sum())

    def cells(self) -> Set[CellIndex]:
        return mask_to_cells(self.occupied)

    def to_list(self) -> List[List[int]]:
        return [[int(r), int(c)] for r, c in np.argwhere(self.occupied)]

    @classmethod
    def from_list(cls, cells: Sequence[Sequence[int]], shape: Tuple[int, int]) -> "GroundTruthTargets":
        grid = np.zeros(shape, dtype=bool)
        for r, c in cells:
            grid[r, c] = True
        return cls(grid)


def mask_to_cells(mask: np.ndarray) -> Set[CellIndex]:
    return {CellIndex(int(r), int(c)) for r, c in np.argwhere(mask)}


def cells_to_mask(cells, shape: Tuple[int, int]) -> np.ndarray:
    """Accept a boolean grid or an iterable of (row, col) and return a boolean grid."""
    if isinstance(cells, np.ndarray) and cells.dtype == bool:
        if cells.shape != tuple(shape):
            raise ValueError(f"mask shape {cells.shape} does not match grid {shape}")
        return cells
    mask = np.zeros(shape, dtype=bool)
    cells = list(cells)
    if cells:
        idx = np.asarray(cells, dtype=int).reshape(-1, 2)
        mask[idx[:, 0], idx[:, 1]] = True
    return mask


def save_world(world: WorldMap, path: str, targets: Optional[GroundTruthTargets] = None) -> None:
    """Write the map (and optionally the target cells) as JSON."""
    payload = world.to_dict()
    if targets is not None:
        payload["targets"] = targets.to_list()
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
    logger.info(f"Wrote map with {len(world.obstacles)} obstacles to {path}")


def load_world(path: str) -> Tuple[WorldMap, Optional[GroundTruthTargets]]:
    with open(path, "r") as f:
        payload = json.load(f)
    world = WorldMap.from_dict(payload)
    targets = None
    if payload.get("targets") is not None:
        targets = GroundTruthTargets.from_list(payload["targets"], world.shape)
    return world, targets
