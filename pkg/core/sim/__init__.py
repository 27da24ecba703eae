"""
Episode orchestration and the paired planner benchmark.
"""
from core.sim.episode import EpisodeResult, StepRecord, run_episode, safety_audit
from core.sim.benchmark import BenchmarkCell, BenchmarkReport, EpisodeOutcome, run_benchmark

__all__ = [
    "EpisodeResult",
    "StepRecord",
    "run_episode",
    "safety_audit",
    "BenchmarkCell",
    "BenchmarkReport",
    "EpisodeOutcome",
    "run_benchmark",
]
