#!/usr/bin/env python
"""
Main runner script for infoplan.

    python run.py generate-env --seed 7 --obstacles 2 --out map.json
    python run.py run --planner greedy --seed 1 --beta 0.9
    python run.py benchmark --planners greedy,mcts --obstacles 1,2,3 --maps 100 --workers 4
    python run.py render --map map.json --result episode.json --out figure.svg
"""
import sys

from cli.main import main

if __name__ == "__main__":
    sys.exit(main())
