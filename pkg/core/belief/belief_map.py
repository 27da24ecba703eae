"""
Target belief map: per-cell log-odds with Bayesian updates, entropy and
mutual-information queries, and the coverage-termination criterion.
"""
import json
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from PIL import Image
from scipy.special import entr, expit

from core.belief.sensor import Observation, SensorModel
from core.config.run_config import DEFAULT_L_CLAMP
from core.world.world_map import WorldMap, cells_to_mask
from core.utils.exceptions import ShapeMismatch

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)


@dataclass(frozen=True)
class BeliefMap:
    """
    Log-odds l_i of target occupancy per grid cell, clamped to |l| <= l_clamp.

    A cell whose log-odds reached the clamp is treated as resolved: its
    entropy and expected information are reported as zero.
    """
    log_odds: np.ndarray
    l_clamp: float = DEFAULT_L_CLAMP

    def __post_init__(self):
        grid = np.clip(np.array(self.log_odds, dtype=float), -self.l_clamp, self.l_clamp)
        grid.setflags(write=False)
        object.__setattr__(self, "log_odds", grid)

    @property
    def shape(self):
        return self.log_odds.shape

    @property
    def resolved(self) -> np.ndarray:
        return np.abs(self.log_odds) >= self.l_clamp * (1.0 - 1e-12)

    def probabilities(self) -> np.ndarray:
        return expit(self.log_odds)

    def with_log_odds(self, log_odds: np.ndarray) -> "BeliefMap":
        return BeliefMap(log_odds, self.l_clamp)


def init_uniform(world: WorldMap, l_clamp: float = DEFAULT_L_CLAMP) -> BeliefMap:
    """Uniform prior P = 0.5 (log-odds 0) everywhere."""
    return BeliefMap(np.zeros(world.shape), l_clamp)


def update(belief: BeliefMap, obs: Observation, sensor: SensorModel) -> BeliefMap:
    """
    Log-odds Bayesian update of the observed cells.

    l <- l + log(p_hit / p_false) for z=1 and l <- l + log((1-p_hit) / (1-p_false))
    for z=0; unobserved cells are unchanged and the result is clamped, so a
    degenerate channel saturates instead of producing infinities.
    """
    if obs.mask.shape != belief.shape:
        raise ShapeMismatch(f"observation grid {obs.mask.shape} does not match belief {belief.shape}")
    l_zero, l_one = sensor.log_odds_increments()
    increments = np.where(obs.values, l_one, l_zero)
    log_odds = belief.log_odds.copy()
    log_odds[obs.mask] = np.clip(log_odds[obs.mask] + increments[obs.mask], -belief.l_clamp, belief.l_clamp)
    return belief.with_log_odds(log_odds)


def cell_entropy(p):
    """Binary entropy in bits with 0 log 0 := 0; works on scalars and arrays."""
    p = np.asarray(p, dtype=float)
    value = (entr(p) + entr(1.0 - p)) / LN2
    return float(value) if value.ndim == 0 else value


def entropy_map(belief: BeliefMap, world: Optional[WorldMap] = None) -> np.ndarray:
    """Per-cell entropy H(M_i) in bits; resolved cells and obstacle cells (if world given) are 0."""
    grid = cell_entropy(belief.probabilities())
    grid[belief.resolved] = 0.0
    if world is not None:
        grid[world.obstacle_mask] = 0.0
    return grid


def free_entropy(belief: BeliefMap, free) -> float:
    """Remaining entropy over the free cells, in bits."""
    mask = cells_to_mask(free, belief.shape)
    return float(entropy_map(belief)[mask].sum())


def probability_map(belief: BeliefMap) -> np.ndarray:
    return belief.probabilities()


def mutual_information_grid(belief: BeliefMap, sensor: SensorModel) -> np.ndarray:
    """
    Per-cell expected information I(M_i; Z_i) of one reading, in bits.

    I = h(p p_hit + (1-p) p_false) - [p h(p_hit) + (1-p) h(p_false)].
    """
    p = belief.probabilities()
    p_z = p * sensor.p_hit + (1.0 - p) * sensor.p_false
    conditional = p * cell_entropy(sensor.p_hit) + (1.0 - p) * cell_entropy(sensor.p_false)
    grid = np.maximum(cell_entropy(p_z) - conditional, 0.0)
    grid[belief.resolved] = 0.0
    return grid


def expected_mutual_information(belief: BeliefMap, visible, sensor: SensorModel) -> float:
    """Expected information of observing `visible`: the sum of per-cell channel MI (cells are independent)."""
    mask = cells_to_mask(visible, belief.shape)
    if not mask.any():
        return 0.0
    return float(mutual_information_grid(belief, sensor)[mask].sum())


def realized_info_gain(before: BeliefMap, after: BeliefMap, free) -> float:
    """
    Entropy reduction over the free cells, summed as-is (can be negative per
    cell under contradicting noisy readings).
    """
    if before.shape != after.shape:
        raise ShapeMismatch(f"belief shapes differ: {before.shape} vs {after.shape}")
    mask = cells_to_mask(free, before.shape)
    return float((entropy_map(before)[mask] - entropy_map(after)[mask]).sum())


def coverage_reached(belief: BeliefMap, free, beta: float) -> bool:
    """
    True iff the free-space entropy dropped by at least beta times its initial
    uniform value of one bit per free cell.
    """
    if not 0.0 <= beta < 1.0:
        raise ValueError(f"beta must lie in [0, 1), got {beta}")
    mask = cells_to_mask(free, belief.shape)
    n_free = float(mask.sum())
    # Compared as a reduction: beta * n_free is exact where (1 - beta) * n_free is not
    return n_free - free_entropy(belief, mask) >= beta * n_free


def export_belief_json(belief: BeliefMap, path: str) -> None:
    """Probability grid as JSON; row 0 is the lowest y."""
    payload = {
        "shape": list(belief.shape),
        "l_clamp": belief.l_clamp,
        "probabilities": np.round(belief.probabilities(), 6).tolist(),
    }
    with open(path, "w") as f:
        json.dump(payload, f)
    logger.debug(f"Wrote belief JSON to {path}")


def belief_to_image(belief: BeliefMap) -> Image.Image:
    """Grayscale image of P (black 0, white 1) with the highest row on top."""
    pixels = np.round(np.flipud(belief.probabilities()) * 255.0).astype(np.uint8)
    return Image.fromarray(pixels)


def export_belief_pgm(belief: BeliefMap, path: str) -> None:
    """Binary portable graymap (P5) of the probability grid."""
    belief_to_image(belief).save(path, format="PPM")
    logger.debug(f"Wrote belief PGM to {path}")
