"""
Paired benchmark: every planner runs on the same generated maps, targets and
sensor-noise seeds, and results are aggregated per (planner, obstacle count).
"""
import csv
import json
import logging
from dataclasses import asdict, dataclass, field
from multiprocessing import Pool
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from core.config.enums import PlannerKind
from core.config.run_config import RunConfig
from core.planners.factory import create_planner
from core.sim.episode import EpisodeResult, run_episode, safety_audit
from core.world.generation import generate_environment, sample_targets

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "planner",
    "n_obstacles",
    "n_episodes",
    "reward_mean",
    "reward_std",
    "failure_pct",
    "completion_time_mean_s",
    "planner_runtime_mean_s",
    "collisions",
    "errors",
]


@dataclass(frozen=True)
class EpisodeSeeds:
    """All seeds of one paired episode; identical for every planner."""
    world: int
    targets: int
    noise: int
    planner: int

    @classmethod
    def derive(cls, base_seed: int, n_obstacles: int, map_index: int) -> "EpisodeSeeds":
        world_seed = base_seed + map_index
        targets, noise, planner = np.random.SeedSequence([world_seed, n_obstacles]).generate_state(3)
        return cls(world_seed, int(targets), int(noise), int(planner))


@dataclass(frozen=True)
class EpisodeTask:
    planner: str
    n_obstacles: int
    map_index: int
    seeds: EpisodeSeeds


@dataclass
class EpisodeOutcome:
    """One benchmark episode: its result, or the error that stopped it."""
    planner: str
    n_obstacles: int
    map_index: int
    seeds: EpisodeSeeds
    world_fingerprint: Optional[str] = None
    result: Optional[EpisodeResult] = None
    collisions: int = 0
    error: Optional[str] = None

    @property
    def sort_key(self):
        return (self.planner, self.n_obstacles, self.map_index)

    def to_dict(self, include_timing: bool = True, include_steps: bool = False) -> Dict[str, Any]:
        data = {
            "planner": self.planner,
            "n_obstacles": self.n_obstacles,
            "map_index": self.map_index,
            "seeds": asdict(self.seeds),
            "world_fingerprint": self.world_fingerprint,
            "collisions": self.collisions,
            "error": self.error,
        }
        if self.result is not None:
            result = self.result.to_dict(include_timing=include_timing)
            if not include_steps:
                result.pop("step_log")
            data["result"] = result
        return data


@dataclass(frozen=True)
class BenchmarkCell:
    """Aggregates for one (planner, obstacle count) pair."""
    planner: str
    n_obstacles: int
    n_episodes: int
    reward_mean: Optional[float]
    reward_std: Optional[float]
    failure_pct: Optional[float]
    completion_time_mean_s: Optional[float]
    planner_runtime_mean_s: Optional[float]
    collisions: int
    errors: int


def aggregate_cell(planner: str, n_obstacles: int, outcomes: Sequence[EpisodeOutcome]) -> BenchmarkCell:
    """
    Aggregate the finished episodes of one cell.

    Failure episodes are included in the reward statistics; completion time
    averages completed episodes only; planner runtime is the mean per call.
    """
    results = [o.result for o in outcomes if o.result is not None]
    errors = sum(1 for o in outcomes if o.error is not None)
    collisions = sum(o.collisions for o in outcomes)
    if not results:
        return BenchmarkCell(planner, n_obstacles, 0, None, None, None, None, None, collisions, errors)
    rewards = np.array([r.cumulative_reward for r in results])
    completion_times = [r.completion_time_s for r in results if r.completed]
    calls = sum(r.planner_calls for r in results)
    runtime = sum(r.planner_runtime_total_s for r in results)
    return BenchmarkCell(
        planner=planner,
        n_obstacles=n_obstacles,
        n_episodes=len(results),
        reward_mean=float(rewards.mean()),
        reward_std=float(rewards.std()),
        failure_pct=100.0 * sum(1 for r in results if r.failure) / len(results),
        completion_time_mean_s=float(np.mean(completion_times)) if completion_times else None,
        planner_runtime_mean_s=runtime / calls if calls else 0.0,
        collisions=collisions,
        errors=errors,
    )


@dataclass
class BenchmarkReport:
    config: Dict[str, Any]
    planners: List[str]
    obstacle_counts: List[int]
    cells: List[BenchmarkCell] = field(default_factory=list)
    episodes: List[EpisodeOutcome] = field(default_factory=list)

    def cell(self, planner: str, n_obstacles: int) -> BenchmarkCell:
        for cell in self.cells:
            if cell.planner == planner and cell.n_obstacles == n_obstacles:
                return cell
        raise KeyError((planner, n_obstacles))

    def recompute_cells(self) -> List[BenchmarkCell]:
        return [
            aggregate_cell(p, n, [o for o in self.episodes if o.planner == p and o.n_obstacles == n])
            for p in self.planners
            for n in self.obstacle_counts
        ]

    def to_dict(self, include_timing: bool = True, include_steps: bool = False) -> Dict[str, Any]:
        cells = [asdict(cell) for cell in self.cells]
        config = json.loads(json.dumps(self.config))
        if not include_timing:
            for cell in cells:
                cell.pop("planner_runtime_mean_s")
            # Worker count changes wall-clock only
            config.get("benchmark", {}).pop("workers", None)
        return {
            "config": config,
            "planners": self.planners,
            "obstacle_counts": self.obstacle_counts,
            "failure_episodes_in_reward": True,
            "cells": cells,
            "episodes": [o.to_dict(include_timing, include_steps) for o in self.episodes],
        }

    def write_json(self, path: str, include_steps: bool = False) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(include_steps=include_steps), f, indent=2)
        logger.info(f"Wrote benchmark report to {path}")

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            for cell in self.cells:
                writer.writerow(asdict(cell))
        logger.info(f"Wrote benchmark CSV to {path}")

    def summary_table(self) -> str:
        """Rows per planner, one column group per obstacle count."""
        def fmt(value, pattern):
            return "-" if value is None else format(value, pattern)

        group = "{:>16} {:>7} {:>9} {:>9}"
        header_top = "{:<10}".format("") + "".join(
            " | " + f"{n} obstacle(s)".center(len(group.format("", "", "", ""))) for n in self.obstacle_counts
        )
        header = "{:<10}".format("planner") + "".join(
            " | " + group.format("reward", "fail%", "time[s]", "rt[s]") for _ in self.obstacle_counts
        )
        lines = [header_top, header, "-" * len(header)]
        for planner in self.planners:
            row = "{:<10}".format(planner)
            for n in self.obstacle_counts:
                cell = self.cell(planner, n)
                reward = "-" if cell.reward_mean is None else f"{cell.reward_mean:.2f}±{cell.reward_std:.2f}"
                row += " | " + group.format(reward, fmt(cell.failure_pct, ".1f"),
                                            fmt(cell.completion_time_mean_s, ".1f"),
                                            fmt(cell.planner_runtime_mean_s, ".3f"))
            lines.append(row)
        return "\n".join(lines)


def build_tasks(planners: Sequence, obstacle_counts: Sequence[int], n_maps: int, base_seed: int) -> List[EpisodeTask]:
    if n_maps < 1:
        raise ValueError(f"n_maps must be >= 1, got {n_maps}")
    return [
        EpisodeTask(PlannerKind(p).value, n, i, EpisodeSeeds.derive(base_seed, n, i))
        for p in planners
        for n in obstacle_counts
        for i in range(n_maps)
    ]


def run_task(task: EpisodeTask, config: RunConfig) -> EpisodeOutcome:
    """Run one paired episode; any error is recorded on the outcome."""
    outcome = EpisodeOutcome(task.planner, task.n_obstacles, task.map_index, task.seeds)
    try:
        world = generate_environment(task.seeds.world, task.n_obstacles, config.world, config.start_clearance)
        outcome.world_fingerprint = world.fingerprint()
        targets = sample_targets(world, task.seeds.targets, config.world.target_density)
        planner = create_planner(task.planner, config, np.random.default_rng(task.seeds.planner))
        result = run_episode(world, targets, planner, config, seed=task.seeds.noise)
        result.final_belief_map = None
        outcome.result = result
        outcome.collisions = safety_audit(result.step_log, world, config.mpc.robot_radius)
    except Exception as e:
        logger.warning(f"Episode {task.planner}/{task.n_obstacles}/{task.map_index} failed: {e}")
        outcome.error = f"{type(e).__name__}: {e}"
    return outcome


def _run_task_star(args) -> EpisodeOutcome:
    return run_task(*args)


def run_benchmark(planners: Optional[Sequence] = None, obstacle_counts: Optional[Sequence[int]] = None,
                  n_maps: Optional[int] = None, base_seed: Optional[int] = None,
                  config: Optional[RunConfig] = None, workers: Optional[int] = None) -> BenchmarkReport:
    """
    Run the paired benchmark.

    Arguments left as None fall back to config.benchmark.

    Args:
        planners: Planner kinds to compare
        obstacle_counts: Obstacle counts, one map set per count
        n_maps: Maps per count (seeds base_seed .. base_seed + n_maps - 1)
        base_seed: First map seed
        config: Run configuration shared by all episodes
        workers: Process count; results do not depend on it

    Returns:
        BenchmarkReport: Aggregates and per-episode outcomes, ordered by
        (planner, obstacle count, map index)
    """
    config = config or RunConfig()
    bench = config.benchmark
    planners = [PlannerKind(p).value for p in (planners or bench.planners)]
    obstacle_counts = list(obstacle_counts if obstacle_counts is not None else bench.obstacle_counts)
    n_maps = n_maps if n_maps is not None else bench.n_maps
    base_seed = base_seed if base_seed is not None else bench.base_seed
    workers = workers if workers is not None else bench.workers

    tasks = build_tasks(planners, obstacle_counts, n_maps, base_seed)
    logger.info(f"Benchmark: {len(planners)} planner(s) x {len(obstacle_counts)} count(s) x {n_maps} map(s) "
                f"on {workers} worker(s)")
    if workers > 1:
        with Pool(processes=workers) as pool:
            outcomes = list(pool.imap_unordered(_run_task_star, [(task, config) for task in tasks]))
    else:
        outcomes = [run_task(task, config) for task in tasks]
    outcomes.sort(key=lambda o: o.sort_key)

    report = BenchmarkReport(
        config=config.model_dump(mode="json"),
        planners=planners,
        obstacle_counts=obstacle_counts,
        episodes=outcomes,
    )
    report.config["benchmark"].update(
        {"planners": planners, "obstacle_counts": obstacle_counts, "n_maps": n_maps, "base_seed": base_seed}
    )
    report.cells = report.recompute_cells()
    for cell in report.cells:
        logger.info(f"{cell.planner} / {cell.n_obstacles} obstacle(s): reward={cell.reward_mean} "
                    f"failure%={cell.failure_pct} errors={cell.errors}")
    return report


def paired_fingerprints_match(report: BenchmarkReport) -> bool:
    """True iff every planner saw the same map for each (obstacle count, map index)."""
    seen: Dict[tuple, str] = {}
    for outcome in report.episodes:
        if outcome.world_fingerprint is None:
            continue
        key = (outcome.n_obstacles, outcome.map_index)
        if seen.setdefault(key, outcome.world_fingerprint) != outcome.world_fingerprint:
            return False
    return True
