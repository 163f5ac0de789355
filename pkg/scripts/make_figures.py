#!/usr/bin/env python3
"""Regenerate the region figures (and optionally the golden copies used by
the acceptance suite).

Usage:
    python scripts/make_figures.py [--outdir OUT] [--golden] [--resolution N]
"""
import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from barriergame.cli import run  # noqa: E402

FIGURES = ("regions", "mu-shift", "p-shift")


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", default="figures")
    ap.add_argument("--golden", action="store_true",
                    help="also refresh tests/golden (resolution forced to 32)")
    ap.add_argument("--resolution", type=int, default=32)
    args = ap.parse_args()

    os.makedirs(args.outdir, exist_ok=True)
    for figure_id in FIGURES:
        svg = os.path.join(args.outdir, f"{figure_id}.svg")
        csv = os.path.join(args.outdir, f"{figure_id}.csv")
        code = run(["figure", figure_id, "--preset", "demo-b",
                    "-o", svg, "--csv", csv,
                    "--resolution", str(args.resolution)])
        if code != 0:
            return code
        print(f"wrote {svg} and {csv}")

    if args.golden:
        golden = os.path.join(os.path.dirname(__file__), "..", "tests", "golden")
        os.makedirs(golden, exist_ok=True)
        for figure_id in FIGURES:
            svg = os.path.join(golden, f"{figure_id}.svg")
            code = run(["figure", figure_id, "--preset", "demo-b",
                        "-o", svg, "--resolution", "32"])
            if code != 0:
                return code
            print(f"wrote {svg}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
