"""
Closed-loop episode: observe, update the belief, recommend a viewpoint every
N_a steps, and track it with the MPC every step until the coverage goal or
the step limit is reached.
"""
import logging
import math
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from core.belief.belief_map import (
    BeliefMap,
    coverage_reached,
    expected_mutual_information,
    free_entropy,
    init_uniform,
    realized_info_gain,
    update,
)
from core.belief.sensor import SensorModel, simulate_observation
from core.config.enums import RewardMode
from core.config.run_config import RunConfig
from core.dynamics.unicycle import Limits, RobotState, step
from core.mpc.solver import MpcSolver, build_constraints
from core.planners.base import Planner, PlanningContext, clip_action
from core.utils.exceptions import NoFeasiblePrimitive
from core.world.geometry import WorldPoint
from core.world.visibility import visible_mask
from core.world.world_map import GroundTruthTargets, WorldMap

logger = logging.getLogger(__name__)

# Called before each step's observation with (t, state, belief, p_ref)
StepObserver = Callable[[int, RobotState, BeliefMap, WorldPoint], None]


@dataclass(frozen=True)
class StepRecord:
    t: int
    x: float
    y: float
    psi: float
    v: float
    omega: float
    p_ref: List[float]
    info_gain: float
    entropy_remaining: float
    mpc_status: Optional[str] = None
    mpc_violation: Optional[float] = None


@dataclass
class EpisodeResult:
    """Outcome of one episode; `failure` is the complement of `completed`."""
    planner: str
    cumulative_reward: float
    n_steps: int
    completed: bool
    completion_time_s: float
    planner_runtime_total_s: float
    planner_calls: int
    policy_rewards: List[float]
    total_info_gain: float
    mpc_not_converged: int
    seed: int
    world_fingerprint: str
    step_log: List[StepRecord] = field(default_factory=list)
    final_belief: Optional[List[List[float]]] = None
    # Final belief for in-process callers; never serialized
    final_belief_map: Optional[BeliefMap] = field(default=None, repr=False, compare=False)

    @property
    def failure(self) -> bool:
        return not self.completed

    @property
    def planner_runtime_mean_s(self) -> float:
        return self.planner_runtime_total_s / self.planner_calls if self.planner_calls else 0.0

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        skipped = ("step_log", "final_belief_map")
        data = {f.name: getattr(self, f.name) for f in fields(self) if f.name not in skipped}
        data["policy_rewards"] = list(self.policy_rewards)
        data["step_log"] = [asdict(record) for record in self.step_log]
        data["failure"] = self.failure
        if include_timing:
            data["planner_runtime_mean_s"] = self.planner_runtime_mean_s
        else:
            data.pop("planner_runtime_total_s")
        if data["final_belief"] is None:
            data.pop("final_belief")
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EpisodeResult":
        values = {k: v for k, v in data.items() if k not in ("failure", "planner_runtime_mean_s")}
        values.setdefault("planner_runtime_total_s", 0.0)
        values["step_log"] = [StepRecord(**record) for record in values.get("step_log", [])]
        return cls(**values)


def run_episode(world: WorldMap, targets: GroundTruthTargets, planner: Planner, config: Optional[RunConfig] = None,
                seed: Optional[int] = None, solver: Optional[MpcSolver] = None,
                observer: Optional[StepObserver] = None) -> EpisodeResult:
    """
    Run one information-gathering episode.

    Args:
        world: Map with a designated start position
        targets: Hidden targets (same grid shape as the map)
        planner: Viewpoint recommender, called every N_a steps
        config: Run configuration (sensor, limits, MPC, episode settings)
        seed: Sensor-noise seed; defaults to config.episode.seed
        solver: MPC instance; built from config if omitted
        observer: Optional hook for frame rendering

    Returns:
        EpisodeResult: Rewards, termination, timing and the per-step log
    """
    config = config or RunConfig()
    episode = config.episode
    seed = episode.seed if seed is None else seed
    if targets.occupied.shape != world.shape:
        raise ValueError(f"target grid {targets.occupied.shape} does not match map {world.shape}")
    if world.start is None:
        raise ValueError("world has no start position")
    world.require_free(world.start)

    sensor = SensorModel.from_config(config.sensor)
    limits = Limits.from_config(config.limits)
    solver = solver or MpcSolver(config.mpc, limits)
    d_max = config.sensor.d_max_m
    rng = np.random.default_rng(seed)
    free = world.free_mask

    belief = init_uniform(world, config.sensor.l_clamp)
    state = RobotState(world.start.x, world.start.y)
    p_ref = WorldPoint(state.x, state.y)
    warm_start = None
    policy_rewards: List[float] = []
    step_log: List[StepRecord] = []
    planner_runtime = 0.0
    planner_calls = 0
    not_converged = 0
    completed = False
    n_steps = episode.t_max

    for t in range(episode.t_max):
        if observer is not None:
            observer(t, state, belief, p_ref)

        visible = visible_mask(world, state.position, d_max)
        observation = simulate_observation(targets, visible, sensor, rng)
        before = belief
        belief = update(belief, observation, sensor)
        if episode.reward_mode == RewardMode.EXPECTED:
            gain = expected_mutual_information(before, visible, sensor)
        else:
            gain = realized_info_gain(before, belief, free)
        if t % episode.n_a == 0:
            policy_rewards.append(episode.r_pen)
        policy_rewards[-1] += gain
        remaining = free_entropy(belief, free)

        if coverage_reached(belief, free, episode.beta):
            completed = True
            n_steps = t + 1
            step_log.append(StepRecord(t, state.x, state.y, state.psi, state.v, state.omega,
                                       [p_ref.x, p_ref.y], gain, remaining))
            break

        if t % episode.n_a == 0:
            context = PlanningContext(belief, world, state, sensor, d_max)
            started = time.perf_counter()
            try:
                target = planner.recommend(context)
            except NoFeasiblePrimitive as e:
                logger.warning(f"Planner fallback at t={t}: {e}")
                target = WorldPoint(state.x, state.y)
            planner_runtime += time.perf_counter() - started
            planner_calls += 1
            p_ref = clip_action((target[0] - state.x, target[1] - state.y), episode.delta_max).apply(state.position)

        solution = solver.solve(state, p_ref, build_constraints(world, state.position, config.mpc), warm_start)
        if not solution.converged:
            not_converged += 1
        step_log.append(StepRecord(t, state.x, state.y, state.psi, state.v, state.omega, [p_ref.x, p_ref.y],
                                   gain, remaining, solution.status.value, solution.max_constraint_violation))
        warm_start = solution.shifted()
        state = step(state, solution.inputs[0], config.mpc.dt, limits)

    result = EpisodeResult(
        planner=getattr(planner, "name", type(planner).__name__),
        cumulative_reward=float(math.fsum(policy_rewards)),
        n_steps=n_steps,
        completed=completed,
        completion_time_s=n_steps * config.mpc.dt,
        planner_runtime_total_s=planner_runtime,
        planner_calls=planner_calls,
        policy_rewards=policy_rewards,
        total_info_gain=float(math.fsum(record.info_gain for record in step_log)),
        mpc_not_converged=not_converged,
        seed=seed,
        world_fingerprint=world.fingerprint(),
        step_log=step_log,
        final_belief=belief.probabilities().tolist() if episode.keep_final_belief else None,
        final_belief_map=belief,
    )
    logger.info(f"Episode finished: planner={result.planner} completed={completed} "
                f"steps={n_steps} reward={result.cumulative_reward:.3f}")
    return result


def _position(record) -> Sequence[float]:
    if isinstance(record, dict):
        return record["x"], record["y"]
    return record.x, record.y


def safety_audit(step_log: Sequence, world: WorldMap, robot_radius: float) -> int:
    """Number of logged positions whose robot disc of radius r intersects an obstacle."""
    return sum(1 for record in step_log if world.obstacle_distance(_position(record)) < robot_radius)
