"""
Monte Carlo tree search over first-order motion primitives.

Nodes are kinematic poses (x, y, psi); edges are constant (speed, turn rate)
primitives of fixed duration. A node's reward is the expected information of
the cells it newly sees along its branch, so revisiting a region earns
nothing.
"""
import itertools
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.belief.belief_map import BeliefMap, mutual_information_grid
from core.belief.sensor import SensorModel
from core.config.run_config import MctsConfig
from core.dynamics.unicycle import RobotState, wrap_angle
from core.planners.base import Planner, PlanningContext
from core.utils.exceptions import NoFeasiblePrimitive
from core.world.geometry import WorldPoint
from core.world.visibility import visible_mask
from core.world.world_map import WorldMap

logger = logging.getLogger(__name__)

Pose = Tuple[float, float, float]
Primitive = Tuple[float, float]

# Positions closer than this count as "not moved"
MIN_DISPLACEMENT = 1e-6


def build_primitives(speeds: Sequence[float], turn_rates: Sequence[float]) -> List[Primitive]:
    """All (speed, turn rate) combinations, speed-major."""
    return [(float(v), float(w)) for v, w in itertools.product(speeds, turn_rates)]


def primitive_rollout(pose: Sequence[float], primitive: Sequence[float], duration: float, dt: float) -> List[Pose]:
    """
    Poses along a constant-input primitive, sampled every dt up to `duration`.

    Uses the exact circular-arc solution of x' = v cos psi, y' = v sin psi,
    psi' = omega (a straight line when omega == 0). The start pose is not
    included; the last pose lies exactly at `duration`.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    x0, y0, psi0 = float(pose[0]), float(pose[1]), float(pose[2])
    speed, rate = float(primitive[0]), float(primitive[1])
    n_steps = max(1, int(math.ceil(duration / dt - 1e-9)))
    poses = []
    for i in range(1, n_steps + 1):
        t = min(i * dt, duration)
        psi = psi0 + rate * t
        if abs(rate) < 1e-12:
            x = x0 + speed * t * math.cos(psi0)
            y = y0 + speed * t * math.sin(psi0)
        else:
            radius = speed / rate
            x = x0 + radius * (math.sin(psi) - math.sin(psi0))
            y = y0 - radius * (math.cos(psi) - math.cos(psi0))
        poses.append((x, y, wrap_angle(psi)))
    return poses


class TreeNode:
    """
    A node of the search tree.

    `value_sum` accumulates the returns backed up through this node and
    `best_return` keeps the largest of them; children are keyed by primitive
    index.
    """

    def __init__(self, pose: Pose, seen: np.ndarray, reward: float = 0.0, depth: int = 0,
                 primitive_index: Optional[int] = None, parent: Optional["TreeNode"] = None):
        self.pose = pose
        self.seen = seen
        self.reward = reward
        self.depth = depth
        self.primitive_index = primitive_index
        self.parent = parent
        self.children: Dict[int, "TreeNode"] = {}
        self.untried: List[int] = []
        self.visits = 0
        self.value_sum = 0.0
        self.best_return = -math.inf

    @property
    def mean_value(self) -> float:
        return self.value_sum / self.visits if self.visits else 0.0

    def is_fully_expanded(self) -> bool:
        return not self.untried

    def update(self, value: float) -> None:
        self.visits += 1
        self.value_sum += value
        self.best_return = max(self.best_return, value)

    def ucb_score(self, c_ucb: float, scale: float = 1.0, offset: float = 0.0) -> float:
        """(mean - offset) / scale + C sqrt(ln N_parent / n); unvisited nodes score +inf."""
        if self.visits == 0:
            return math.inf
        exploration = c_ucb * math.sqrt(math.log(max(self.parent.visits, 1)) / self.visits)
        return (self.mean_value - offset) / scale + exploration

    def select_child(self, c_ucb: float, normalize: bool = False) -> "TreeNode":
        """
        Highest UCB1 score; ties go to the lowest primitive index.

        With `normalize`, sibling means are min-max scaled to [0, 1] first so
        C acts on the spread between the options rather than on raw bits.
        """
        indices = sorted(self.children)
        scale, offset = 1.0, 0.0
        if normalize:
            means = [self.children[i].mean_value for i in indices if self.children[i].visits]
            if means and max(means) > min(means):
                offset, scale = min(means), max(means) - min(means)
        best, best_score = None, -math.inf
        for index in indices:
            score = self.children[index].ucb_score(c_ucb, scale, offset)
            if score > best_score:
                best, best_score = self.children[index], score
        return best

    def best_child(self) -> "TreeNode":
        """
        Child leading the best plan found: highest backed-up return, then
        highest mean, then lowest primitive index.
        """
        return max(sorted(self.children.items()),
                   key=lambda item: (item[1].best_return, item[1].mean_value))[1]

    def best_plan(self) -> List["TreeNode"]:
        """Nodes of the best plan below this one, following best_child to a leaf."""
        plan, node = [], self
        while node.children:
            node = node.best_child()
            plan.append(node)
        return plan

    def subtree(self) -> List["TreeNode"]:
        """This node and all its descendants, breadth first in primitive-index order."""
        nodes, frontier = [], [self]
        while frontier:
            nodes.extend(frontier)
            frontier = [child for node in frontier for _, child in sorted(node.children.items())]
        return nodes


class MctsSearch:
    """One planning call: builds the tree from the current pose."""

    def __init__(self, belief: BeliefMap, world: WorldMap, sensor: SensorModel, config: MctsConfig,
                 rng: np.random.Generator, d_max: float, robot_radius: float):
        self.world = world
        self.config = config
        self.rng = rng
        self.d_max = d_max
        self.robot_radius = robot_radius
        self.primitives = build_primitives(config.speeds, config.turn_rates)
        self.mi_grid = mutual_information_grid(belief, sensor)
        self._visible_cache: Dict[Tuple[float, float], np.ndarray] = {}

    # -- geometry ---------------------------------------------------------------

    def _pose_is_safe(self, pose: Sequence[float]) -> bool:
        return self.world.is_free_point(pose) and self.world.clearance(pose) >= self.robot_radius

    def feasible_end_pose(self, pose: Pose, index: int) -> Optional[Pose]:
        """End pose of primitive `index` from `pose`, or None if any sampled pose collides."""
        path = primitive_rollout(pose, self.primitives[index], self.config.primitive_duration, self.config.dt)
        if all(self._pose_is_safe(p) for p in path):
            return path[-1]
        return None

    def _visible(self, pose: Sequence[float]) -> np.ndarray:
        key = (round(pose[0], 9), round(pose[1], 9))
        mask = self._visible_cache.get(key)
        if mask is None:
            mask = visible_mask(self.world, pose, self.d_max)
            self._visible_cache[key] = mask
        return mask

    def observe(self, pose: Sequence[float], seen: np.ndarray) -> Tuple[float, np.ndarray]:
        """Expected information of the cells newly seen from `pose`, and the updated seen mask."""
        visible = self._visible(pose)
        fresh = visible & ~seen
        return float(self.mi_grid[fresh].sum()), seen | visible

    # -- tree -------------------------------------------------------------------

    def _make_node(self, pose: Pose, seen: np.ndarray, reward: float, depth: int,
                   index: Optional[int] = None, parent: Optional[TreeNode] = None) -> TreeNode:
        node = TreeNode(pose, seen, reward, depth, index, parent)
        if depth < self.config.depth:
            node.untried = [i for i in range(len(self.primitives)) if self.feasible_end_pose(pose, i) is not None]
        return node

    def make_root(self, pose: Pose) -> TreeNode:
        _, seen = self.observe(pose, np.zeros(self.world.shape, dtype=bool))
        return self._make_node(pose, seen, 0.0, 0)

    def expand(self, node: TreeNode) -> TreeNode:
        index = node.untried.pop(0)
        end = self.feasible_end_pose(node.pose, index)
        reward, seen = self.observe(end, node.seen)
        child = self._make_node(end, seen, reward, node.depth + 1, index, node)
        node.children[index] = child
        return child

    def simulate(self, node: TreeNode) -> float:
        """Mean return of N_sim uniformly random primitive rollouts from `node` to the depth limit."""
        remaining = self.config.depth - node.depth
        if remaining <= 0:
            return 0.0
        total = 0.0
        for _ in range(self.config.n_sim):
            pose, seen, value = node.pose, node.seen, 0.0
            for _ in range(remaining):
                end = None
                for index in self.rng.permutation(len(self.primitives)):
                    end = self.feasible_end_pose(pose, int(index))
                    if end is not None:
                        break
                if end is None:
                    break
                reward, seen = self.observe(end, seen)
                value += reward
                pose = end
            total += value
        return total / self.config.n_sim

    def run(self, root: TreeNode) -> TreeNode:
        if not root.untried and not root.children:
            raise NoFeasiblePrimitive(f"every primitive from pose {root.pose} collides")
        for _ in range(self.config.n_tree):
            node, path = root, [root]
            while node.is_fully_expanded() and node.children:
                node = node.select_child(self.config.ucb_c, self.config.normalize_values)
                path.append(node)
            if node.untried:
                node = self.expand(node)
                path.append(node)
            value = self.simulate(node)
            # Each node is credited with the rewards from its own edge onwards
            for visited in reversed(path):
                value += visited.reward
                visited.update(value)
        return root

    def moving_extension(self, node: TreeNode) -> Optional[Pose]:
        """
        End pose of the feasible primitive from `node` that leaves its position
        and sees the most new information; lowest index on ties.
        """
        best, best_reward = None, -math.inf
        for index in range(len(self.primitives)):
            end = self.feasible_end_pose(node.pose, index)
            if end is None or displacement(end, node.pose) <= MIN_DISPLACEMENT:
                continue
            reward, _ = self.observe(end, node.seen)
            if reward > best_reward:
                best, best_reward = end, reward
        return best

    def select_target(self, root: TreeNode) -> Pose:
        """
        First pose along the best plan that leaves the root position.

        When the best plan only turns in place, the robot is sent along the
        most informative moving primitive from the deepest plan node that has
        one, then from the rest of the tree in order of best return. The root
        pose comes back only if nothing in the tree can move.
        """
        plan = root.best_plan()
        for node in plan:
            if displacement(node.pose, root.pose) > MIN_DISPLACEMENT:
                return node.pose
        on_plan = {id(node) for node in plan}
        others = sorted((node for node in root.subtree() if id(node) not in on_plan),
                        key=lambda node: (-node.best_return, node.depth))
        for node in list(reversed(plan)) + others:
            end = self.moving_extension(node)
            if end is not None and displacement(end, root.pose) > MIN_DISPLACEMENT:
                logger.debug(f"MCTS: best plan stays in place, extending from depth {node.depth}")
                return end
        logger.warning(f"MCTS: no moving primitive anywhere in the tree from {root.pose}")
        return root.pose


def displacement(pose: Sequence[float], other: Sequence[float]) -> float:
    return math.hypot(pose[0] - other[0], pose[1] - other[1])


def mcts_plan(belief: BeliefMap, world: WorldMap, state: RobotState, sensor: SensorModel,
              config: Optional[MctsConfig] = None, rng: Optional[np.random.Generator] = None,
              d_max: float = 5.0, robot_radius: float = 0.5) -> WorldPoint:
    """
    Run N_tree search iterations and return the first position along the best
    plan that differs from the current one.

    Raises:
        NoFeasiblePrimitive: If every primitive from the current pose collides
    """
    config = config or MctsConfig()
    rng = rng if rng is not None else np.random.default_rng()
    search = MctsSearch(belief, world, sensor, config, rng, d_max, robot_radius)
    root = search.run(search.make_root((state.x, state.y, state.psi)))
    best = root.best_child()
    logger.debug(f"MCTS: {len(root.children)} root children, best primitive {best.primitive_index} "
                 f"return {best.best_return:.3f} mean {best.mean_value:.3f} over {best.visits} visits")
    target = search.select_target(root)
    return WorldPoint(target[0], target[1])


class MctsPlanner(Planner):
    name = "mcts"

    def __init__(self, config: Optional[MctsConfig] = None, rng: Optional[np.random.Generator] = None,
                 robot_radius: float = 0.5):
        self.config = config or MctsConfig()
        self.rng = rng if rng is not None else np.random.default_rng()
        self.robot_radius = robot_radius

    def recommend(self, context: PlanningContext) -> WorldPoint:
        return mcts_plan(context.belief, context.world, context.state, context.sensor, self.config,
                         self.rng, context.d_max, self.robot_radius)
