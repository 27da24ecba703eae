"""
Binary target sensor: the forward channel P(z | m) used to simulate readings,
and the matching inverse model (log-odds increments) used by the update.
"""
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from core.world.geometry import CellIndex
from core.world.world_map import GroundTruthTargets, cells_to_mask


@dataclass(frozen=True)
class SensorModel:
    """P(z=1 | m=1) = p_hit, P(z=1 | m=0) = p_false."""
    p_hit: float = 1.0
    p_false: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.p_false < self.p_hit <= 1.0):
            raise ValueError(f"sensor must satisfy 0 <= p_false < p_hit <= 1, got {self.p_hit}, {self.p_false}")

    @property
    def is_perfect(self) -> bool:
        return self.p_hit == 1.0 and self.p_false == 0.0

    def log_odds_increments(self) -> Tuple[float, float]:
        """(l_meas(z=0), l_meas(z=1)); infinite for degenerate channels."""
        with np.errstate(divide="ignore"):
            l_one = float(np.log(self.p_hit) - np.log(self.p_false))
            l_zero = float(np.log1p(-self.p_hit) - np.log1p(-self.p_false))
        return l_zero, l_one

    @classmethod
    def from_config(cls, config) -> "SensorModel":
        return cls(p_hit=config.p_hit, p_false=config.p_false)


@dataclass(frozen=True)
class Observation:
    """
    Readings over the visible set.

    `mask` marks the observed cells and `values` holds z for those cells
    (False elsewhere).
    """
    mask: np.ndarray
    values: np.ndarray

    @property
    def readings(self) -> Dict[CellIndex, int]:
        return {CellIndex(int(r), int(c)): int(self.values[r, c]) for r, c in np.argwhere(self.mask)}

    def __len__(self) -> int:
        return int(self.mask.sum())


def simulate_observation(targets: GroundTruthTargets, visible, sensor: SensorModel,
                         rng: np.random.Generator) -> Observation:
    """
    Draw one reading per visible cell: z=1 with probability p_hit on a target and p_false elsewhere.

    Args:
        targets: Ground-truth target grid
        visible: Visible set as a boolean grid or iterable of cells
        sensor: Channel parameters
        rng: Source of randomness; one uniform draw per visible cell in row-major order

    Returns:
        Observation: Readings with domain equal to `visible`
    """
    mask = cells_to_mask(visible, targets.occupied.shape)
    values = np.zeros(mask.shape, dtype=bool)
    hits = targets.occupied[mask]
    if sensor.is_perfect:
        values[mask] = hits
    elif len(hits):
        p_one = np.where(hits, sensor.p_hit, sensor.p_false)
        values[mask] = rng.random(len(hits)) < p_one
    return Observation(mask=mask, values=values)

