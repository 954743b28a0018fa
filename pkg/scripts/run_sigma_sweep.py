#!/usr/bin/env python3
"""Reproduce the noise-level experiment: sweep sigma from e^0 down to
e^-8, write the aggregated CSV, and optionally render the figure.

Desk scale (default) subsamples the grid and runs 1000 trials per point;
--paper-scale runs the full grid at 10000 trials (slow).
"""

import argparse

from slhc_estimate import cli, harness


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--paper-scale", action="store_true")
    ap.add_argument("--trials", type=int, default=None)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="sigma_sweep.csv")
    ap.add_argument("--plot", default=None, help="optional figure path (.svg)")
    args = ap.parse_args()

    cfg = harness.SweepConfig(
        kind="sigma",
        grid=harness.sigma_grid(step=0.2 if args.paper_scale else 0.4),
        trials=args.trials or (harness.PAPER_TRIALS if args.paper_scale
                               else harness.DESK_TRIALS),
        seed=args.seed,
        out=args.out,
    )
    rows = harness.run_sigma_sweep(cfg)
    print(f"wrote {len(rows)} grid points to {args.out}")
    for r in rows:
        print(f"  sigma={r.grid_value:.6f}  incorrect={r.incorrect_ratio:.4f}"
              f"  mean_l1={r.mean_l1:.4f}  mpple_match={r.mpple_match_ratio:.3f}")
    if args.plot:
        cli.main(["plot", "--in", args.out, "--out", args.plot])


if __name__ == "__main__":
    main()
