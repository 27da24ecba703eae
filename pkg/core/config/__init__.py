"""
Configuration package for infoplan
"""
from core.config.app_config import AppConfig
from core.config.enums import PlannerKind, SolverStatus, RewardMode, EnvironmentKind
from core.config.run_config import (
    WorldGenConfig,
    SensorConfig,
    LimitsConfig,
    SolverConfig,
    MpcConfig,
    GreedyConfig,
    MctsConfig,
    ObservationConfig,
    EpisodeConfig,
    BenchmarkConfig,
    RunConfig,
    build_run_config,
    load_run_config,
)

__all__ = [
    'AppConfig',
    'PlannerKind',
    'SolverStatus',
    'RewardMode',
    'EnvironmentKind',
    'WorldGenConfig',
    'SensorConfig',
    'LimitsConfig',
    'SolverConfig',
    'MpcConfig',
    'GreedyConfig',
    'MctsConfig',
    'ObservationConfig',
    'EpisodeConfig',
    'BenchmarkConfig',
    'RunConfig',
    'build_run_config',
    'load_run_config',
]
