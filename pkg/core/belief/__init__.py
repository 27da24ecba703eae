"""
Probabilistic target belief: sensor model, log-odds map, entropy and information.
"""
from core.belief.sensor import Observation, SensorModel, simulate_observation
from core.belief.belief_map import (
    BeliefMap,
    cell_entropy,
    coverage_reached,
    entropy_map,
    expected_mutual_information,
    export_belief_json,
    export_belief_pgm,
    free_entropy,
    init_uniform,
    mutual_information_grid,
    probability_map,
    realized_info_gain,
    update,
)

__all__ = [
    "Observation",
    "SensorModel",
    "simulate_observation",
    "BeliefMap",
    "cell_entropy",
    "coverage_reached",
    "entropy_map",
    "expected_mutual_information",
    "export_belief_json",
    "export_belief_pgm",
    "free_entropy",
    "init_uniform",
    "mutual_information_grid",
    "probability_map",
    "realized_info_gain",
    "update",
]
