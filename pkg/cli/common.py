"""
Shared helpers for the command modules: config flags, overrides and output.
"""
import json
import logging
import os
from typing import Any, Dict, List, Optional

from core.config.run_config import RunConfig, load_run_config

logger = logging.getLogger(__name__)


def add_config_arguments(parser) -> None:
    """--config and --set, available on every command."""
    parser.add_argument("--config", help="JSON run configuration file")
    parser.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="Override one config value (repeatable)")


def override(section: Optional[str], key: str, value: Any) -> Dict[str, Any]:
    """Nested override dict for a dedicated flag; empty when the flag was not given."""
    if value is None:
        return {}
    return {section: {key: value}} if section else {key: value}


def parse_list(text: Optional[str], cast=str) -> Optional[List[Any]]:
    """'a,b,c' -> [a, b, c]."""
    if text is None:
        return None
    return [cast(item.strip()) for item in text.split(",") if item.strip()]


def resolve_config(args, *flag_overrides: Dict[str, Any]) -> RunConfig:
    """
    Resolve the run configuration of a command.

    Precedence is dedicated flags > --set > config file > defaults.
    """
    overrides: List[Any] = list(args.set or [])
    overrides.extend(o for o in flag_overrides if o)
    return load_run_config(args.config, overrides)


def ensure_parent(path: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def write_json(path: str, payload: Dict[str, Any]) -> None:
    ensure_parent(path)
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
    logger.info(f"Wrote {path}")
