"""Regenerate every sweep family as CSV plus SVG panels.

Usage: python3 scripts/run_figures.py [OUTDIR] [--jobs N]
"""
import argparse
import os
import sys

from kerrqc.cli import main as kerrqc

MODELS = ("geometry", "equilibrium", "transient", "neq-steady")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("outdir", nargs="?", default="figures")
    p.add_argument("--jobs", type=int, default=1)
    args = p.parse_args(argv)
    os.makedirs(args.outdir, exist_ok=True)
    for model in MODELS:
        out = os.path.join(args.outdir, f"{model}.csv")
        rc = kerrqc([model, "--out", out, "--svg", "--jobs", str(args.jobs)])
        if rc:
            return rc
        print(f"{model}: {out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
