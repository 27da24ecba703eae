"""
Greedy next-best-view: sample viewpoints in the action square and pick the one
with the highest expected information.
"""
import logging
from typing import Optional, Sequence

import numpy as np

from core.belief.belief_map import BeliefMap, expected_mutual_information
from core.belief.sensor import SensorModel
from core.config.run_config import GreedyConfig
from core.planners.base import Planner, PlanningContext
from core.world.geometry import WorldPoint
from core.world.visibility import visible_mask
from core.world.world_map import WorldMap

logger = logging.getLogger(__name__)


def sample_candidates(position: Sequence[float], delta_max: float, n_candidates: int,
                      rng: np.random.Generator) -> np.ndarray:
    """(n, 2) viewpoints drawn uniformly in the square of half-width delta_max around position."""
    offsets = rng.uniform(-delta_max, delta_max, size=(n_candidates, 2))
    return np.asarray(position, dtype=float)[None, :] + offsets


def score_candidates(belief: BeliefMap, world: WorldMap, candidates: np.ndarray, sensor: SensorModel,
                     d_max: float) -> np.ndarray:
    """Expected MI per candidate; -inf for candidates outside free space."""
    scores = np.full(len(candidates), -np.inf)
    for i, candidate in enumerate(candidates):
        if not world.is_free_point(candidate):
            continue
        scores[i] = expected_mutual_information(belief, visible_mask(world, candidate, d_max), sensor)
    return scores


def greedy_next_best_view(belief: BeliefMap, world: WorldMap, position: Sequence[float], sensor: SensorModel,
                          config: Optional[GreedyConfig] = None, rng: Optional[np.random.Generator] = None,
                          d_max: float = 5.0) -> WorldPoint:
    """
    Best of N_nbv uniformly sampled viewpoints.

    Args:
        belief: Current target belief
        world: Map used for validity and visibility
        position: Robot position (free space)
        sensor: Channel used to score expected information
        config: Candidate count and action half-width
        rng: Candidate sampler
        d_max: Sensor range

    Returns:
        WorldPoint: Highest-scoring candidate (lowest index on ties), or the
        current position when no candidate is valid
    """
    config = config or GreedyConfig()
    rng = rng if rng is not None else np.random.default_rng()
    candidates = sample_candidates(position, config.delta_max, config.n_candidates, rng)
    scores = score_candidates(belief, world, candidates, sensor, d_max)
    if not np.isfinite(scores).any():
        logger.debug("No valid greedy candidate; keeping the current position")
        return WorldPoint(float(position[0]), float(position[1]))
    best = int(np.argmax(scores))
    return WorldPoint(float(candidates[best, 0]), float(candidates[best, 1]))


class GreedyPlanner(Planner):
    name = "greedy"

    def __init__(self, config: Optional[GreedyConfig] = None, rng: Optional[np.random.Generator] = None):
        self.config = config or GreedyConfig()
        self.rng = rng if rng is not None else np.random.default_rng()

    def recommend(self, context: PlanningContext) -> WorldPoint:
        return greedy_next_best_view(context.belief, context.world, context.position, context.sensor,
                                     self.config, self.rng, context.d_max)
