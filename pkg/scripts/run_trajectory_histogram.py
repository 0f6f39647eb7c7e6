#!/usr/bin/env python3
"""Occupation histogram of two logistic-map orbits at a weak control parameter.

The schedule generator ranks raw orbit samples, so any visible non-uniformity
here is structure an attacker gets for free.  Prints an ASCII bar chart and
writes the counts as CSV.
"""

import argparse
import os

from permbreak.keystream import trajectory_histogram


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--mu", type=float, default=3.5786)
    parser.add_argument("--seeds", type=float, nargs=2, default=[0.3333, 0.5656])
    parser.add_argument("--count", type=int, default=10_000)
    parser.add_argument("--bins", type=int, default=50)
    parser.add_argument("--out", default="trajectory_out")
    args = parser.parse_args()

    histograms = [
        trajectory_histogram(x0, args.mu, args.count, args.bins) for x0 in args.seeds
    ]

    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "trajectory.csv")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("bin_lo,bin_hi," + ",".join(f"count_x0_{x0}" for x0 in args.seeds) + "\n")
        for b in range(args.bins):
            cells = ",".join(str(int(h[b])) for h in histograms)
            fh.write(f"{b / args.bins:.6f},{(b + 1) / args.bins:.6f},{cells}\n")

    peak = max(int(h.max()) for h in histograms)
    for x0, hist in zip(args.seeds, histograms):
        print(f"mu={args.mu} x0={x0}")
        for b, count in enumerate(hist):
            bar = "#" * round(60 * int(count) / peak)
            print(f"  [{b / args.bins:4.2f},{(b + 1) / args.bins:4.2f}) {int(count):6d} {bar}")
        print()
    print(f"counts written to {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
