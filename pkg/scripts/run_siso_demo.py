#!/usr/bin/env python3
"""Run the scalar airspeed-loop demo and write its trace CSV.

Usage: python scripts/run_siso_demo.py [configs/siso_demo.yaml] [--out f.csv]
"""

import sys

from uavsim.cli import main

if __name__ == "__main__":
    sys.exit(main(["siso-demo", *sys.argv[1:]]))
