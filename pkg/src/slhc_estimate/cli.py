"""Command-line entry points.

    slhc-estimate sweep    run a Monte Carlo sweep and write a CSV
    slhc-estimate check    run the fast property battery
    slhc-estimate plot     render sweep CSVs as line charts
    slhc-estimate estimate run the estimators on an edge-vector fixture

Sweep options may also come from a key-value config file; explicit flags
win over file entries.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import harness
from .dendrogram import dendrogram_of
from .edges import read_edge_vector
from .estimators import mpple, slhc_estimator
from .noise import get_model


def parse_grid(spec: str, kind: str) -> tuple:
    """Grid formats:

    - "a,b,c"            explicit values (floats for sigma, ints for nsamples)
    - "exp:0:-8:-0.2"    e^start down to e^stop in exponent steps
    - "pow2:0:16[:2]"    2^start .. 2^stop, exponent step optional
    """
    if spec.startswith("exp:"):
        _, start, stop, step = spec.split(":")
        start, stop, step = float(start), float(stop), float(step)
        if step == 0 or (stop - start) * step < 0:
            raise ValueError(f"bad exponent range in grid spec {spec!r}")
        exps, e = [], start
        while (e >= stop - 1e-12) if step < 0 else (e <= stop + 1e-12):
            exps.append(e)
            e += step
        return tuple(math.exp(v) for v in exps)
    if spec.startswith("pow2:"):
        parts = spec.split(":")
        start, stop = int(parts[1]), int(parts[2])
        step = int(parts[3]) if len(parts) > 3 else 1
        return tuple(2 ** p for p in range(start, stop + 1, step))
    values = [v.strip() for v in spec.split(",") if v.strip()]
    if kind == "nsamples":
        return tuple(int(v) for v in values)
    return tuple(float(v) for v in values)


def load_config_file(path: str) -> dict:
    """key=value lines; blank lines and #-comments ignored."""
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"expected key=value, got {line!r}")
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


_CONFIG_KEYS = {
    "kind": str, "n": int, "box": float, "model": str, "sigma": float,
    "trials": int, "grid": str, "seed": int, "out": str,
    "paper_scale": lambda v: v.lower() in ("1", "true", "yes"),
    "fix_theta": lambda v: v.lower() in ("1", "true", "yes"),
}


def build_sweep_config(args: argparse.Namespace) -> harness.SweepConfig:
    settings = {}
    if args.config:
        raw = load_config_file(args.config)
        unknown = set(raw) - set(_CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        settings = {k: _CONFIG_KEYS[k](v) for k, v in raw.items()}

    def pick(name, flag_value, default):
        if flag_value is not None:
            return flag_value
        return settings.get(name, default)

    kind = pick("kind", args.kind, "sigma")
    paper = args.paper_scale or settings.get("paper_scale", False)
    trials = pick("trials", args.trials, harness.PAPER_TRIALS if paper
                  else harness.DESK_TRIALS)
    grid_spec = pick("grid", args.grid, None)
    if grid_spec is not None:
        grid = parse_grid(grid_spec, kind)
    elif kind == "sigma":
        grid = harness.sigma_grid(step=0.2 if paper else 0.4)
    else:
        grid = (harness.nsamples_grid(max_power=16, factor=2) if paper
                else harness.nsamples_grid(max_power=12, factor=4))
    return harness.SweepConfig(
        kind=kind,
        grid=grid,
        trials=int(trials),
        n_points=int(pick("n", args.n, 5)),
        metric_box=float(pick("box", args.box, 100.0)),
        model=pick("model", args.model, "lognormal"),
        sigma=float(pick("sigma", args.sigma, 0.3)),
        seed=int(pick("seed", args.seed, 0)),
        out=pick("out", args.out, None),
        fix_theta=args.fix_theta or settings.get("fix_theta", False),
    )


def cmd_sweep(args) -> int:
    cfg = build_sweep_config(args)
    rows = harness.run_sweep(cfg)
    if not cfg.out:
        print(harness.CSV_HEADER)
        for r in rows:
            print(f"{r.sweep},{r.grid_value!r},{r.trials},{r.incorrect_ratio!r},"
                  f"{r.mean_l1!r},{r.mpple_match_ratio!r},{r.seed}")
    else:
        print(f"wrote {len(rows)} rows to {cfg.out}")
    return 0


def cmd_check(args) -> int:
    from .selfcheck import run_property_checks

    results = run_property_checks(seed=args.seed)
    failed = 0
    for res in results:
        tag = "PASS" if res.ok else "FAIL"
        failed += not res.ok
        print(f"[{tag}] {res.name}: {res.detail}")
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def cmd_plot(args) -> int:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = harness.read_csv(args.infile)
    kind = rows[0].sweep
    xs = [r.grid_value for r in rows]
    xlabel = "noise level" if kind == "sigma" else "measurement rounds"

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.4))
    ax1.plot(xs, [r.incorrect_ratio for r in rows], "o-")
    ax1.set_xscale("log")
    ax1.set_xlabel(xlabel)
    ax1.set_ylabel("incorrect structure ratio")
    ax2.plot(xs, [r.mean_l1 for r in rows], "o-")
    ax2.set_xscale("log")
    positive = [r.mean_l1 for r in rows if r.mean_l1 > 0]
    if len(positive) == len(rows):
        ax2.set_yscale("log")
    ax2.set_xlabel(xlabel)
    ax2.set_ylabel("mean l1 error")
    if kind == "sigma":
        ax1.invert_xaxis()
        ax2.invert_xaxis()
    fig.tight_layout()
    fig.savefig(args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_estimate(args) -> int:
    vec = read_edge_vector(args.infile)
    u = slhc_estimator(vec)
    print("single linkage:", " ".join(repr(float(v)) for v in u.values))
    if args.model:
        model = get_model(args.model, sigma=args.sigma)
        u_hat = mpple(vec, model)
        print("tree profile:  ", " ".join(repr(float(v)) for v in u_hat.values))
    print("dendrogram:", dendrogram_of(u).to_newick())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slhc-estimate", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a Monte Carlo sweep")
    p.add_argument("--kind", choices=("sigma", "nsamples"), default=None)
    p.add_argument("--n", type=int, default=None, help="point count")
    p.add_argument("--box", type=float, default=None, help="metric sampling box")
    p.add_argument("--model", default=None)
    p.add_argument("--sigma", type=float, default=None,
                   help="fixed noise level for the nsamples sweep")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--grid", default=None, help="grid spec, see parse_grid")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="CSV output path")
    p.add_argument("--paper-scale", action="store_true",
                   help="full grid and 10000 trials per point")
    p.add_argument("--fix-theta", action="store_true",
                   help="hold one ground truth per grid point")
    p.add_argument("--config", default=None, help="key=value config file")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("check", help="run the fast property battery")
    p.add_argument("--seed", type=int, default=20240917)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("plot", help="render a sweep CSV as line charts")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True, help="figure path (.svg/.pdf/.png)")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("estimate", help="estimate from an edge-vector fixture")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--model", default=None)
    p.add_argument("--sigma", type=float, default=0.3)
    p.set_defaults(func=cmd_estimate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
