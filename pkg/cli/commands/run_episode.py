"""
run: one closed-loop episode, written as JSON with optional SVG frames and
final-belief exports.
"""
import logging
import os

import numpy as np

from cli.common import add_config_arguments, ensure_parent, override, resolve_config, write_json
from core.belief.belief_map import export_belief_json, export_belief_pgm
from core.config.enums import PlannerKind
from core.planners.factory import create_planner
from core.planners.observation import extract_local_grid
from core.render.svg_renderer import render_frame
from core.sim.benchmark import EpisodeSeeds
from core.sim.episode import run_episode
from core.utils.exceptions import ConfigError
from core.world.generation import generate_environment, sample_targets
from core.world.world_map import load_world

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("run", help="Run a single episode")
    add_config_arguments(parser)
    parser.add_argument("--map", help="Map JSON from generate-env (default: generate from --seed)")
    parser.add_argument("--planner", choices=[k.value for k in PlannerKind], help="Viewpoint planner")
    parser.add_argument("--seed", type=int, help="Episode seed")
    parser.add_argument("--obstacles", type=int, help="Number of obstacles when generating the map")
    parser.add_argument("--beta", type=float, help="Coverage goal")
    parser.add_argument("--t-max", type=int, help="Step limit")
    parser.add_argument("--out", default="episode.json", help="Result JSON path")
    parser.add_argument("--render-every", type=int, metavar="K", help="Write an SVG frame every K steps")
    parser.add_argument("--frames-dir", default="frames", help="Directory for rendered frames")
    parser.add_argument("--belief-out", metavar="PREFIX", help="Write the final belief as PREFIX.json and PREFIX.pgm")
    parser.set_defaults(func=run)


class FrameRecorder:
    """Episode observer that renders every K-th step."""

    def __init__(self, world, config, every: int, directory: str):
        if every < 1:
            raise ConfigError(f"--render-every must be >= 1, got {every}")
        self.world = world
        self.config = config
        self.every = every
        self.directory = directory
        self.trajectory = []
        self.frames = []
        os.makedirs(directory, exist_ok=True)

    def __call__(self, t, state, belief, p_ref) -> None:
        self.trajectory.append((state.x, state.y))
        if t % self.every:
            return
        local_grid = extract_local_grid(self.world, state, self.config.observation.local_grid_size,
                                        self.config.observation.local_cell_size)
        path = os.path.join(self.directory, f"frame_{t:04d}.svg")
        render_frame(self.world, self.trajectory, state, p_ref, local_grid, belief.probabilities(), path,
                     robot_radius=self.config.mpc.robot_radius, title=f"t = {t}")
        self.frames.append(path)


def run(args) -> int:
    config = resolve_config(
        args,
        override("episode", "planner", args.planner),
        override("episode", "seed", args.seed),
        override(None, "n_obstacles", args.obstacles),
        override("episode", "beta", args.beta),
        override("episode", "t_max", args.t_max),
    )
    seeds = EpisodeSeeds.derive(config.episode.seed, config.n_obstacles, 0)

    targets = None
    if args.map:
        world, targets = load_world(args.map)
    else:
        world = generate_environment(seeds.world, config.n_obstacles, config.world, config.start_clearance)
    if targets is None:
        targets = sample_targets(world, seeds.targets, config.world.target_density)

    planner = create_planner(config.episode.planner, config, np.random.default_rng(seeds.planner))
    recorder = None
    if args.render_every is not None:
        recorder = FrameRecorder(world, config, args.render_every, args.frames_dir)
    result = run_episode(world, targets, planner, config, seed=seeds.noise, observer=recorder)

    payload = {
        "config": config.model_dump(mode="json"),
        "seeds": {"world": seeds.world, "targets": seeds.targets, "noise": seeds.noise, "planner": seeds.planner},
        "map": args.map or world.provenance,
        "world": world.to_dict(),
        "result": result.to_dict(),
    }
    if recorder is not None:
        payload["frames"] = recorder.frames
    write_json(args.out, payload)

    if args.belief_out:
        ensure_parent(args.belief_out)
        export_belief_json(result.final_belief_map, f"{args.belief_out}.json")
        export_belief_pgm(result.final_belief_map, f"{args.belief_out}.pgm")

    status = "completed" if result.completed else "failure"
    print(f"{status}: steps={result.n_steps} reward={result.cumulative_reward:.3f}")
    return 0
