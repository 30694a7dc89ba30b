#!/usr/bin/env python3
"""Run scenario file(s) and write CSV + summary; thin wrapper over the CLI.

Usage: python scripts/run_experiment.py configs/paper_default.yaml [--set k=v]
"""

import sys

from uavsim.cli import main

if __name__ == "__main__":
    sys.exit(main(["run", *sys.argv[1:]]))
