#!/usr/bin/env python3
"""Frame health report: Parseval defect, trace identity, symbol convergence.

Thin wrapper over the frame-check CLI subcommand with a reproducible default
configuration; prints the report and leaves the file on disk.
"""

import argparse
import sys

from weylcs.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="frame_report.txt")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--dim", type=int, default=1)
    args = ap.parse_args()

    if args.dim == 1:
        overrides = ["--set", "frame_n=128", "--set", "h=0.05",
                     "--set", "box=0,3.2"]
    else:
        overrides = ["--set", "dim=2", "--set", "frame_n=32",
                     "--set", "h=0.05", "--set", "box=0,1.6;0,1.6"]
    rc = cli_main(["frame-check", "--seed", str(args.seed),
                   "--out", args.out] + overrides)
    if rc == 0:
        print(open(args.out).read(), end="")
        print(f"report written to {args.out}")
    return rc


if __name__ == "__main__":
    sys.exit(main())
