#!/usr/bin/env python3
"""Run every registered preset sweep and collect the CSV outputs.

Usage: python scripts/run_all_presets.py [--out DIR] [--skip-2d]
The 1D sweeps take seconds each; the 2D sweeps take a few minutes.
"""
import argparse
import os
import sys
import tempfile
import time

from pnpb import cli
from pnpb.presets import PRESET_NAMES


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="pnpb-out", help="output root directory")
    parser.add_argument("--skip-2d", action="store_true",
                        help="skip the (slow) 2D presets")
    args = parser.parse_args()

    os.environ["PNPB_OUTPUT_ROOT"] = args.out
    worst = 0
    for name in PRESET_NAMES:
        if args.skip_2d and name.startswith("test-2d"):
            print(f"-- {name}: skipped")
            continue
        with tempfile.NamedTemporaryFile("w", suffix=".cfg", delete=False) as fh:
            fh.write(f"preset = {name}\n")
            cfg_path = fh.name
        start = time.time()
        rc = cli.main(["run", cfg_path])
        os.unlink(cfg_path)
        print(f"-- {name}: exit {rc} ({time.time() - start:.1f}s)")
        worst = max(worst, rc)
    return worst


if __name__ == "__main__":
    sys.exit(main())
