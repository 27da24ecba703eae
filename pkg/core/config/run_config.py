"""
Run configuration tree.

Every knob of a simulation run lives here as a validated pydantic model.
Defaults follow the reference hyperparameters where they exist (MPC horizon
and weights, N_a, t_max, r_pen, delta_max, the MCTS block); the map, sensor
and robot sizes are engineering choices.
"""
import json
import math
import logging
from typing import Any, Dict, Iterable, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from core.config.enums import EnvironmentKind, PlannerKind, RewardMode
from core.utils.exceptions import ConfigError

logger = logging.getLogger(__name__)

# logit(0.999)
DEFAULT_L_CLAMP = math.log(0.999 / 0.001)


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", validate_assignment=True)


class WorldGenConfig(_Section):
    """Environment size, resolution and random generation ranges."""
    width_m: float = Field(20.0, gt=0)
    height_m: float = Field(20.0, gt=0)
    resolution_m: float = Field(0.5, gt=0)
    kind: EnvironmentKind = EnvironmentKind.RANDOM
    half_extent_min_m: float = Field(1.0, gt=0)
    half_extent_max_m: float = Field(4.0, gt=0)
    max_attempts: int = Field(1000, ge=1)
    target_density: float = Field(0.1, ge=0, le=1)
    # None means "use the MPC robot radius"
    start_clearance_m: Optional[float] = Field(None, ge=0)

    @model_validator(mode="after")
    def _check_ranges(self):
        if self.half_extent_min_m > self.half_extent_max_m:
            raise ValueError("half_extent_min_m must not exceed half_extent_max_m")
        if 2 * self.half_extent_max_m >= min(self.width_m, self.height_m):
            raise ValueError("obstacles must be smaller than the map extent")
        if self.resolution_m > min(self.width_m, self.height_m):
            raise ValueError("resolution_m must not exceed the map extent")
        return self


class SensorConfig(_Section):
    """Binary target sensor and belief clamp."""
    p_hit: float = Field(1.0, ge=0, le=1)
    p_false: float = Field(0.0, ge=0, le=1)
    d_max_m: float = Field(5.0, gt=0)
    l_clamp: float = Field(DEFAULT_L_CLAMP, gt=0)

    @model_validator(mode="after")
    def _check_informative(self):
        if not self.p_false < self.p_hit:
            raise ValueError("sensor must be informative: p_false < p_hit")
        return self


class LimitsConfig(_Section):
    """Admissible state and input sets of the unicycle."""
    v_min: float = 0.0
    v_max: float = Field(3.0, gt=0)
    omega_max: float = Field(math.pi / 2, gt=0)
    a_max: float = Field(2.0, gt=0)
    alpha_max: float = Field(math.pi, gt=0)

    @model_validator(mode="after")
    def _check_speed_range(self):
        # v_max > 0 already, so this covers both v_min <= 0 <= v_max and 0 <= v_min < v_max
        if not self.v_min < self.v_max:
            raise ValueError("v_min must be below v_max")
        return self


class SolverConfig(_Section):
    """Augmented-Lagrangian outer loop and quasi-Newton inner loop."""
    max_outer_iterations: int = Field(6, ge=1)
    max_inner_iterations: int = Field(60, ge=1)
    initial_penalty: float = Field(10.0, gt=0)
    penalty_growth: float = Field(10.0, gt=1)
    constraint_tolerance: float = Field(1e-3, gt=0)
    gradient_tolerance: float = Field(1e-6, gt=0)
    merit_weight: float = Field(1e3, gt=0)
    # JSON-lines trace of every outer iteration, for solver diagnostics
    trace_path: Optional[str] = None


class MpcConfig(_Section):
    """Receding-horizon optimizer settings."""
    horizon: int = Field(15, ge=1)
    dt: float = Field(0.1, gt=0)
    q_n: float = Field(5.0, ge=0)
    q_a: float = Field(0.003, ge=0)
    q_alpha: float = Field(0.003, ge=0)
    n_obs: int = Field(4, ge=0)
    robot_radius: float = Field(0.5, gt=0)
    collision_margin: float = Field(0.01, ge=0)
    eps_den: float = Field(1e-4, gt=0)
    include_bounds: bool = True
    solver: SolverConfig = Field(default_factory=SolverConfig)


class GreedyConfig(_Section):
    n_candidates: int = Field(30, ge=1)
    delta_max: float = Field(4.0, gt=0)


class MctsConfig(_Section):
    n_tree: int = Field(100, ge=1)
    n_sim: int = Field(10, ge=1)
    depth: int = Field(4, ge=1)
    primitive_duration: float = Field(1.2, gt=0)
    speeds: List[float] = Field(default_factory=lambda: [0.0, 1.0, 3.0], min_length=1)
    turn_rates: List[float] = Field(
        default_factory=lambda: [-math.pi / 4, -math.pi / 10, 0.0, math.pi / 10, math.pi / 4],
        min_length=1,
    )
    ucb_c: float = Field(2.0, ge=0)
    dt: float = Field(0.1, gt=0)
    # Min-max scale sibling means to [0, 1] during selection so C_UCB acts on their spread
    normalize_values: bool = True


class ObservationConfig(_Section):
    local_grid_size: int = Field(32, ge=1)
    # None means "use the world resolution"
    local_cell_size: Optional[float] = Field(None, gt=0)


class EpisodeConfig(_Section):
    beta: float = Field(0.9, ge=0, lt=1)
    t_max: int = Field(640, ge=1)
    n_a: int = Field(5, ge=1)
    r_pen: float = -0.1
    seed: int = Field(0, ge=0)
    planner: PlannerKind = PlannerKind.GREEDY
    delta_max: float = Field(4.0, gt=0)
    reward_mode: RewardMode = RewardMode.REALIZED
    keep_final_belief: bool = False


class BenchmarkConfig(_Section):
    planners: List[PlannerKind] = Field(
        default_factory=lambda: [PlannerKind.GREEDY, PlannerKind.MCTS], min_length=1
    )
    obstacle_counts: List[int] = Field(default_factory=lambda: [1, 2, 3], min_length=1)
    n_maps: int = Field(100, ge=1)
    base_seed: int = Field(0, ge=0)
    workers: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _check_counts(self):
        if any(n < 0 for n in self.obstacle_counts):
            raise ValueError("obstacle counts must be non-negative")
        return self


class RunConfig(_Section):
    """Fully resolved configuration of a run; echoed into every artifact."""
    world: WorldGenConfig = Field(default_factory=WorldGenConfig)
    n_obstacles: int = Field(2, ge=0)
    sensor: SensorConfig = Field(default_factory=SensorConfig)
    limits: LimitsConfig = Field(default_factory=LimitsConfig)
    mpc: MpcConfig = Field(default_factory=MpcConfig)
    greedy: GreedyConfig = Field(default_factory=GreedyConfig)
    mcts: MctsConfig = Field(default_factory=MctsConfig)
    observation: ObservationConfig = Field(default_factory=ObservationConfig)
    episode: EpisodeConfig = Field(default_factory=EpisodeConfig)
    benchmark: BenchmarkConfig = Field(default_factory=BenchmarkConfig)

    @property
    def start_clearance(self) -> float:
        if self.world.start_clearance_m is not None:
            return self.world.start_clearance_m
        return self.mpc.robot_radius


def format_validation_error(error: ValidationError) -> str:
    """Render a pydantic error as `dotted.path: message` lines."""
    lines = []
    for item in error.errors():
        path = ".".join(str(part) for part in item["loc"]) or "<root>"
        lines.append(f"{path}: {item['msg']}")
    return "; ".join(lines)


def _parse_value(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def parse_override(text: str) -> Dict[str, Any]:
    """Turn `section.key=value` into a nested dict; the value is parsed as JSON when possible."""
    if "=" not in text:
        raise ConfigError(f"override '{text}' must have the form section.key=value")
    key, raw = text.split("=", 1)
    parts = [p for p in key.strip().split(".") if p]
    if not parts:
        raise ConfigError(f"override '{text}' has an empty key")
    nested: Dict[str, Any] = {parts[-1]: _parse_value(raw.strip())}
    for part in reversed(parts[:-1]):
        nested = {part: nested}
    return nested


def _deep_merge(base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def build_run_config(data: Optional[Dict[str, Any]] = None,
                     overrides: Optional[Iterable[Dict[str, Any]]] = None) -> RunConfig:
    """
    Validate a config dict with overrides applied on top.

    Args:
        data: Values from a config file (may be partial)
        overrides: Nested dicts applied in order; later ones win

    Returns:
        RunConfig: The resolved configuration

    Raises:
        ConfigError: With one `path: message` entry per invalid field
    """
    merged: Dict[str, Any] = dict(data or {})
    for override in overrides or []:
        merged = _deep_merge(merged, override)
    try:
        return RunConfig.model_validate(merged)
    except ValidationError as e:
        raise ConfigError(format_validation_error(e)) from e


def load_run_config(path: Optional[str] = None, overrides: Optional[Iterable[Any]] = None) -> RunConfig:
    """
    Load a RunConfig from a JSON file with overrides applied in order.

    Overrides are `section.key=value` strings or nested dicts; precedence is
    overrides > file > defaults.
    """
    data: Dict[str, Any] = {}
    if path:
        with open(path, "r") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"{path}: invalid JSON ({e})") from e
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top-level value must be an object")
        logger.debug(f"Loaded config file {path}")
    parsed = [parse_override(item) if isinstance(item, str) else item for item in overrides or []]
    return build_run_config(data, parsed)
