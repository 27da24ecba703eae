"""
render: SVG of a stored map, optionally with the trajectory of a stored run.
"""
import json
import logging

from cli.common import ensure_parent
from core.render.svg_renderer import render_map
from core.utils.exceptions import ConfigError
from core.world.world_map import WorldMap, load_world

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("render", help="Render a map and an optional episode trajectory")
    parser.add_argument("--map", help="Map JSON (default: the map embedded in --result)")
    parser.add_argument("--result", help="Episode JSON written by `run`")
    parser.add_argument("--out", required=True, help="Output SVG path")
    parser.add_argument("--no-targets", action="store_true", help="Do not draw stored targets")
    parser.set_defaults(func=run)


def run(args) -> int:
    if not args.map and not args.result:
        raise ConfigError("render needs --map or --result")
    trajectory = None
    world, targets = (load_world(args.map) if args.map else (None, None))
    if args.result:
        with open(args.result, "r") as f:
            payload = json.load(f)
        trajectory = [(record["x"], record["y"]) for record in payload["result"]["step_log"]]
        if world is None:
            world = WorldMap.from_dict(payload["world"])

    ensure_parent(args.out)
    render_map(world, args.out, trajectory=trajectory, targets=None if args.no_targets else targets)
    logger.info(f"Rendered {args.out}")
    return 0
