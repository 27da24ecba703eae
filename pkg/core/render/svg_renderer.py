"""
Static SVG figures of maps, trajectories and beliefs.

Frames show the map with obstacles, the driven trajectory (a single path with
gid "trajectory"), the current reference viewpoint and the robot, plus two
insets: the egocentric obstacle grid and the belief P(target) on a
blue (0) -> green (0.5) -> red (1) scale.
"""
import logging
import math
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import LinearSegmentedColormap, to_hex  # noqa: E402
from matplotlib.patches import Circle, Rectangle  # noqa: E402

from core.dynamics.unicycle import RobotState  # noqa: E402
from core.world.world_map import GroundTruthTargets, WorldMap  # noqa: E402

logger = logging.getLogger(__name__)

# Odd N puts P = 0.5 exactly on a lookup entry
BELIEF_COLORMAP = LinearSegmentedColormap.from_list(
    "belief", [(0.0, 0.0, 0.55), (0.0, 0.6, 0.0), (0.6, 0.0, 0.0)], N=255
)

# Stable element ids and no timestamp, so identical inputs give identical files
plt.rcParams["svg.hashsalt"] = "infoplan"
_SVG_METADATA = {"Date": None}


def belief_color(p: float) -> str:
    return to_hex(BELIEF_COLORMAP(float(p)))


def belief_rgb(probabilities: np.ndarray) -> np.ndarray:
    """(rows, cols, 3) uint8 image of a probability grid; row 0 is the lowest y."""
    rgba = BELIEF_COLORMAP(np.clip(np.asarray(probabilities, dtype=float), 0.0, 1.0))
    return np.round(rgba[..., :3] * 255.0).astype(np.uint8)


def _draw_world(ax, world: WorldMap) -> None:
    ax.add_patch(Rectangle((0.0, 0.0), world.width_m, world.height_m, fill=False, edgecolor="black", lw=1.0))
    for rect in world.obstacles:
        ax.add_patch(Rectangle((rect.xmin, rect.ymin), rect.xmax - rect.xmin, rect.ymax - rect.ymin,
                               facecolor="dimgray", edgecolor="black", lw=0.5))
    ax.set_xlim(0.0, world.width_m)
    ax.set_ylim(0.0, world.height_m)
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")


def _draw_trajectory(ax, trajectory: Sequence[Sequence[float]]) -> None:
    if len(trajectory) == 0:
        return
    xs = [p[0] for p in trajectory]
    ys = [p[1] for p in trajectory]
    ax.plot(xs, ys, color="tab:blue", lw=1.2, gid="trajectory")


def _draw_robot(ax, state: RobotState, radius: float) -> None:
    ax.add_patch(Circle((state.x, state.y), radius, facecolor="none", edgecolor="tab:orange", lw=1.0))
    ax.plot([state.x, state.x + radius * math.cos(state.psi)],
            [state.y, state.y + radius * math.sin(state.psi)], color="tab:orange", lw=1.0)


def _save(fig, path: str) -> None:
    fig.savefig(path, format="svg", metadata=_SVG_METADATA)
    plt.close(fig)
    logger.debug(f"Wrote {path}")


def render_map(world: WorldMap, path: str, trajectory: Optional[Sequence[Sequence[float]]] = None,
               targets: Optional[GroundTruthTargets] = None, title: Optional[str] = None) -> None:
    """
    Map preview with optional targets and trajectory.

    Args:
        world: Map to draw
        path: Output SVG path
        trajectory: Optional sequence of (x, y) positions
        targets: Optional ground-truth targets, drawn as dots
        title: Optional figure title
    """
    fig, ax = plt.subplots(figsize=(6, 6))
    _draw_world(ax, world)
    if targets is not None and targets.count:
        rows, cols = np.nonzero(targets.occupied)
        ax.scatter((cols + 0.5) * world.resolution_m, (rows + 0.5) * world.resolution_m,
                   s=6, color="tab:red", label="targets")
    if world.start is not None:
        ax.plot([world.start.x], [world.start.y], marker="o", color="tab:green", ms=5, label="start")
    if trajectory is not None:
        _draw_trajectory(ax, trajectory)
    if title:
        ax.set_title(title)
    _save(fig, path)


def render_frame(world: WorldMap, trajectory: Sequence[Sequence[float]], state: RobotState,
                 p_ref: Sequence[float], local_grid: np.ndarray, probabilities: np.ndarray, path: str,
                 robot_radius: float = 0.5, title: Optional[str] = None) -> None:
    """
    One episode frame: map panel plus local-grid and belief insets.

    Args:
        world: Map to draw
        trajectory: Positions driven so far, including the current one
        state: Current robot state
        p_ref: Current reference viewpoint
        local_grid: Egocentric obstacle grid O_t
        probabilities: Belief P(target) per cell
        path: Output SVG path
        robot_radius: Radius of the drawn robot disc
        title: Optional title of the map panel
    """
    fig = plt.figure(figsize=(11, 6))
    grid = fig.add_gridspec(2, 2, width_ratios=[2, 1])
    ax_map = fig.add_subplot(grid[:, 0])
    ax_local = fig.add_subplot(grid[0, 1])
    ax_belief = fig.add_subplot(grid[1, 1])

    _draw_world(ax_map, world)
    _draw_trajectory(ax_map, trajectory)
    ax_map.plot([p_ref[0]], [p_ref[1]], marker="x", color="magenta", ms=8, mew=2, gid="p_ref")
    _draw_robot(ax_map, state, robot_radius)
    if title:
        ax_map.set_title(title)

    ax_local.imshow(np.asarray(local_grid, dtype=float), cmap="gray_r", vmin=0.0, vmax=1.0,
                    origin="lower", interpolation="nearest")
    ax_local.set_title("local obstacles")
    ax_local.set_xticks([])
    ax_local.set_yticks([])

    ax_belief.imshow(belief_rgb(probabilities), origin="lower", interpolation="nearest",
                     extent=(0.0, world.width_m, 0.0, world.height_m))
    ax_belief.set_title("belief P(target)")
    ax_belief.set_xticks([])
    ax_belief.set_yticks([])

    fig.tight_layout()
    _save(fig, path)
