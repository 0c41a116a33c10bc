"""
Infinitesimal Actions - Main Entry Point

Command line entry point for building and checking rational actions of infinitesimal
group schemes on function fields F_p(x_1, ..., x_n).

Usage:
    python main.py info --group '{"type": "kerFV", "p": 2, "n": 2}'
    python main.py build --group group.json --vars x,y --output action.json
    python main.py verify --action action.json

Run "python main.py --help" for every subcommand.
"""

import sys

from src.cli.commands import run
from src.utils.constants import LOG_LEVEL
from src.utils.logging import setup_logging


def main() -> int:
    """Initialize logging and dispatch to the command line."""
    setup_logging(LOG_LEVEL)
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
