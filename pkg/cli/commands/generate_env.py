"""
generate-env: write a random or structured map (with its targets) to JSON.
"""
import logging

from cli.common import add_config_arguments, ensure_parent, override, resolve_config
from core.config.enums import EnvironmentKind
from core.render.svg_renderer import render_map
from core.sim.benchmark import EpisodeSeeds
from core.world.generation import generate_environment, sample_targets
from core.world.world_map import save_world

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("generate-env", help="Generate an environment map")
    add_config_arguments(parser)
    parser.add_argument("--seed", type=int, help="Map seed (default: episode.seed)")
    parser.add_argument("--obstacles", type=int, help="Number of obstacles")
    parser.add_argument("--kind", choices=[k.value for k in EnvironmentKind], help="Environment kind")
    parser.add_argument("--out", required=True, help="Output map JSON")
    parser.add_argument("--svg", help="Optional SVG preview path")
    parser.set_defaults(func=run)


def run(args) -> int:
    config = resolve_config(
        args,
        override("episode", "seed", args.seed),
        override(None, "n_obstacles", args.obstacles),
        override("world", "kind", args.kind),
    )
    seeds = EpisodeSeeds.derive(config.episode.seed, config.n_obstacles, 0)
    world = generate_environment(seeds.world, config.n_obstacles, config.world, config.start_clearance)
    targets = sample_targets(world, seeds.targets, config.world.target_density)
    world.provenance["target_seed"] = seeds.targets

    ensure_parent(args.out)
    save_world(world, args.out, targets)
    if args.svg:
        ensure_parent(args.svg)
        render_map(world, args.svg, targets=targets, title=f"seed {seeds.world}")
    logger.info(f"Generated {len(world.obstacles)} obstacle(s) after {world.provenance.get('attempts', 1)} attempt(s)")
    print(f"seed: {seeds.world}")
    return 0
