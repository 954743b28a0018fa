#!/usr/bin/env python3
"""Reproduce the sample-count experiment: at fixed sigma, pool N
measurement rounds per edge into joint MLEs before clustering, sweeping
N upward, and watch the estimate converge.

Desk scale uses N = 1, 4, ..., 4096 at 1000 trials; --paper-scale runs
N = 1..2^16 in powers of 2 at 10000 trials for each sigma in
{0.3, 0.2, 0.1, 0.05} (slow)."""

import argparse

from slhc_estimate import cli, harness


def run_one(sigma, args):
    out = args.out.replace(".csv", f"_sigma{sigma}.csv") \
        if args.paper_scale else args.out
    cfg = harness.SweepConfig(
        kind="nsamples",
        grid=(harness.nsamples_grid(max_power=16, factor=2) if args.paper_scale
              else harness.nsamples_grid(max_power=12, factor=4)),
        trials=args.trials or (harness.PAPER_TRIALS if args.paper_scale
                               else harness.DESK_TRIALS),
        sigma=sigma,
        seed=args.seed,
        out=out,
    )
    rows = harness.run_n_sweep(cfg)
    print(f"sigma={sigma}: wrote {len(rows)} grid points to {out}")
    for r in rows:
        print(f"  N={int(r.grid_value):>6}  incorrect={r.incorrect_ratio:.4f}"
              f"  mean_l1={r.mean_l1:.4f}")
    if args.plot:
        cli.main(["plot", "--in", out, "--out",
                  args.plot.replace(".svg", f"_sigma{sigma}.svg")
                  if args.paper_scale else args.plot])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--paper-scale", action="store_true")
    ap.add_argument("--sigma", type=float, default=0.3)
    ap.add_argument("--trials", type=int, default=None)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="n_sweep.csv")
    ap.add_argument("--plot", default=None, help="optional figure path (.svg)")
    args = ap.parse_args()

    sigmas = (0.3, 0.2, 0.1, 0.05) if args.paper_scale else (args.sigma,)
    for sigma in sigmas:
        run_one(sigma, args)


if __name__ == "__main__":
    main()
