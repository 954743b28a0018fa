"""Monte Carlo harness for the two experiments: a noise-level sweep with
one measurement round per trial, and a sample-count sweep at fixed noise.

Per trial: draw a ground-truth metric uniformly from a box conditioned on
the triangle inequality, corrupt its edges independently under the noise
model, run the estimators, and compare against single linkage of the
truth.  Seeding is hierarchical, so any (grid point, trial) pair can be
reproduced in isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dendrogram import l1_error, same_structure
from .edges import EdgeVector, MetricVector, num_edges, triangle_mask
from .estimators import mpple, slhc_estimator
from .noise import NoiseModel, get_model, multi_sample_mle, sample
from .slhc import SamplingBudgetError, single_linkage

_SEED_MASK = (1 << 63) - 1

DESK_TRIALS = 1000
PAPER_TRIALS = 10000


def sigma_grid(step: float = 0.4) -> tuple[float, ...]:
    """Noise levels e^0 down to e^-8 in exponent steps of `step`."""
    exps = np.arange(0.0, -8.0 - 1e-9, -abs(step))
    return tuple(float(math.exp(e)) for e in exps)


def nsamples_grid(max_power: int = 12, factor: int = 4) -> tuple[int, ...]:
    """Sample counts 1, factor, factor^2, ... up to 2^max_power."""
    out = []
    n = 1
    while n <= 2 ** max_power:
        out.append(n)
        n *= factor
    return tuple(out)


@dataclass(frozen=True)
class SweepConfig:
    kind: str                      # "sigma" | "nsamples"
    grid: tuple                    # sigma values, or sample counts
    trials: int = DESK_TRIALS
    n_points: int = 5
    metric_box: float = 100.0
    model: str = "lognormal"
    sigma: float = 0.3             # fixed noise level for the nsamples sweep
    seed: int = 0
    out: Optional[str] = None
    fix_theta: bool = False
    metric_attempt_budget: int = 10 ** 6
    model_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("sigma", "nsamples"):
            raise ValueError(f"kind must be 'sigma' or 'nsamples', got {self.kind!r}")
        if not self.grid:
            raise ValueError("grid must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.n_points < 3:
            raise ValueError("need at least 3 points")
        object.__setattr__(self, "grid", tuple(self.grid))


@dataclass(frozen=True)
class TrialRecord:
    grid_value: float
    seed: int
    structure_correct: bool
    l1_err: float
    mpple_equals_slhc: bool


@dataclass(frozen=True)
class SweepRow:
    sweep: str
    grid_value: float
    trials: int
    incorrect_ratio: float
    mean_l1: float
    mpple_match_ratio: float
    seed: int

    @property
    def incorrect_se(self) -> float:
        """Binomial standard error of the incorrect-structure ratio."""
        p = self.incorrect_ratio
        return math.sqrt(p * (1.0 - p) / self.trials)


def trial_seed(master_seed: int, grid_index: int, trial_index: int) -> int:
    """Per-trial seed: master xor a hash of the (grid, trial) position."""
    return (master_seed ^ (hash((grid_index, trial_index)) & _SEED_MASK)) & _SEED_MASK


def sample_ground_truth_metric(n: int, box: float, rng: np.random.Generator,
                               max_attempts: int = 10 ** 6,
                               batch: int = 64) -> MetricVector:
    """Uniform draw from (0, box)^edges conditioned on the triangle
    inequality, by batched rejection.  The first accepted candidate in
    draw order is returned, so the result is a faithful conditioned
    uniform sample and depends only on the rng state."""
    if n < 3:
        raise ValueError("need at least 3 points")
    m = num_edges(n)
    attempts = 0
    while attempts < max_attempts:
        take = min(batch, max_attempts - attempts)
        cand = rng.uniform(0.0, box, size=(take, m))
        attempts += take
        hits = np.nonzero(triangle_mask(cand, n))[0]
        if hits.size:
            return MetricVector(n, cand[hits[0]])
    raise SamplingBudgetError(
        f"no metric among {attempts} uniform draws on (0, {box})^{m}; "
        f"acceptance rate below {1.0 / max_attempts:.2e}")


def _make_model(cfg: SweepConfig, sigma: float) -> NoiseModel:
    params = dict(cfg.model_params)
    if cfg.model == "lognormal":
        params["sigma"] = sigma
    return get_model(cfg.model, **params)


def run_trial(cfg: SweepConfig, grid_index: int, trial_index: int,
              theta: Optional[MetricVector] = None) -> TrialRecord:
    """One trial at one grid point, reproducible in isolation."""
    value = cfg.grid[grid_index]
    seed = trial_seed(cfg.seed, grid_index, trial_index)
    rng = np.random.default_rng(seed)

    if cfg.kind == "sigma":
        sigma, n_samples = float(value), 1
    else:
        sigma, n_samples = cfg.sigma, int(value)
    model = _make_model(cfg, sigma)

    if theta is None:
        theta = sample_ground_truth_metric(
            cfg.n_points, cfg.metric_box, rng,
            max_attempts=cfg.metric_attempt_budget)
    truth = single_linkage(theta)

    xs = sample(model, theta.values, rng, size=n_samples)
    if cfg.kind == "sigma":
        x = EdgeVector(cfg.n_points, xs[0])
    else:
        # pool the measurement rounds into per-edge joint MLEs; the
        # estimator path below is then identical to the sigma sweep's
        x = EdgeVector(cfg.n_points, multi_sample_mle(model, xs))
    estimate = slhc_estimator(x)
    tree_profile = mpple(x, model)

    return TrialRecord(
        grid_value=float(value),
        seed=seed,
        structure_correct=same_structure(estimate, truth),
        l1_err=l1_error(estimate, truth),
        mpple_equals_slhc=bool(np.array_equal(tree_profile.values, estimate.values)),
    )


def _shared_theta(cfg: SweepConfig, grid_index: int) -> MetricVector:
    rng = np.random.default_rng(trial_seed(cfg.seed, grid_index, -1))
    return sample_ground_truth_metric(cfg.n_points, cfg.metric_box, rng,
                                      max_attempts=cfg.metric_attempt_budget)


def run_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """Run every trial at every grid point and aggregate.

    A sampling-budget failure flushes the rows finished so far to
    cfg.out (when set) before re-raising.
    """
    rows: list[SweepRow] = []
    try:
        for gi, value in enumerate(cfg.grid):
            theta = _shared_theta(cfg, gi) if cfg.fix_theta else None
            records = [run_trial(cfg, gi, ti, theta=theta)
                       for ti in range(cfg.trials)]
            rows.append(SweepRow(
                sweep=cfg.kind,
                grid_value=float(value),
                trials=cfg.trials,
                incorrect_ratio=sum(not r.structure_correct for r in records) / cfg.trials,
                mean_l1=float(np.mean([r.l1_err for r in records])),
                mpple_match_ratio=sum(r.mpple_equals_slhc for r in records) / cfg.trials,
                seed=cfg.seed,
            ))
    except SamplingBudgetError:
        if rows and cfg.out:
            emit_csv(rows, cfg.out)
        raise
    if cfg.out:
        emit_csv(rows, cfg.out)
    return rows


def run_sigma_sweep(cfg: SweepConfig) -> list[SweepRow]:
    if cfg.kind != "sigma":
        raise ValueError(f"expected kind='sigma', got {cfg.kind!r}")
    return run_sweep(cfg)


def run_n_sweep(cfg: SweepConfig) -> list[SweepRow]:
    if cfg.kind != "nsamples":
        raise ValueError(f"expected kind='nsamples', got {cfg.kind!r}")
    return run_sweep(cfg)


CSV_HEADER = "sweep,grid_value,trials,incorrect_ratio,mean_l1,mpple_match_ratio,seed"


def emit_csv(rows: list[SweepRow], path) -> None:
    """One row per grid point; floats use repr so parsing is exact."""
    if not rows:
        raise ValueError("no rows to write")
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            fh.write(f"{r.sweep},{r.grid_value!r},{r.trials},{r.incorrect_ratio!r},"
                     f"{r.mean_l1!r},{r.mpple_match_ratio!r},{r.seed}\n")


def read_csv(path) -> list[SweepRow]:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"unexpected CSV header in {path}")
    rows = []
    for ln in lines[1:]:
        sweep, gv, tr, ir, ml, mr, sd = ln.split(",")
        rows.append(SweepRow(sweep, float(gv), int(tr), float(ir),
                             float(ml), float(mr), int(sd)))
    return rows
