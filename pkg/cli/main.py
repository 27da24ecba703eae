"""
Command-line entry point: infoplan {generate-env, run, benchmark, render}.
"""
import argparse
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from cli.commands import register_all
from core.config.app_config import AppConfig
from core.utils.exceptions import ConfigError, GenerationExhausted
from core.utils.logger import configure_logging

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=AppConfig.APP_NAME,
        description="Information-gathering navigation: environments, episodes and planner benchmarks",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {AppConfig.APP_VERSION}")
    parser.add_argument("--log-level", help="Log level (default: $INFOPLAN_LOG or INFO)")
    subparsers = parser.add_subparsers(dest="command", required=True)
    register_all(subparsers)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments and run the selected command.

    Returns:
        int: 0 on success, 2 on configuration errors, 3 on I/O errors
    """
    args = build_parser().parse_args(argv)
    configure_logging((args.log_level or AppConfig.LOG_LEVEL).upper())
    try:
        return args.func(args)
    except (ConfigError, ValidationError, GenerationExhausted) as e:
        logger.error(f"Configuration error: {e}")
        return AppConfig.EXIT_CONFIG_ERROR
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return AppConfig.EXIT_IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
