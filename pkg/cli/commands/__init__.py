"""
Command registry that combines the command modules
"""
from cli.commands import benchmark, generate_env, render, run_episode

COMMANDS = [generate_env, run_episode, benchmark, render]


def register_all(subparsers) -> None:
    for command in COMMANDS:
        command.register(subparsers)
