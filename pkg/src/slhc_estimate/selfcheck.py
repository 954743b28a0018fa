"""Fast property battery behind the `check` CLI subcommand.

Each check is a trimmed-down version of a test-suite property, sized to
run in seconds.  The full suite lives in tests/ and is the authority.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dendrogram import dendrogram_of, l1_error, ultrametric_of
from .edges import EdgeVector, num_edges
from .estimators import mpple, slhc_estimator
from .harness import sample_ground_truth_metric
from .noise import get_model, monotonicity_report, normalization_residual
from .slhc import minimax_path_bruteforce, sample_fiber, single_linkage
from .trees import all_msts


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str


def _random_weights(n: int, rng) -> EdgeVector:
    return EdgeVector(n, rng.uniform(0.0, 1.0, size=num_edges(n)))


def check_minimax_oracle(rng) -> CheckResult:
    worst = 0.0
    for _ in range(60):
        n = int(rng.integers(3, 7))
        w = _random_weights(n, rng)
        delta = np.abs(single_linkage(w).values - minimax_path_bruteforce(w).values)
        worst = max(worst, float(delta.max()))
    return CheckResult("single linkage equals minimax path costs", worst <= 1e-12,
                       f"max |delta| = {worst:.2e} over 60 random weights")


def check_operator_axioms(rng) -> CheckResult:
    bad = 0
    for _ in range(200):
        theta = sample_ground_truth_metric(5, 100.0, rng)
        u = single_linkage(theta)
        idem = np.array_equal(single_linkage(u).values, u.values)
        contract = np.all(u.values <= theta.values)
        bump = EdgeVector(5, theta.values + rng.uniform(0, 10, size=10))
        mono = np.all(single_linkage(bump).values >= u.values)
        bad += not (idem and contract and mono)
    return CheckResult("idempotent, contractive, monotone", bad == 0,
                       f"{bad} violations in 200 random metrics")


def check_mst_transform_invariance(rng) -> CheckResult:
    bad = 0
    for _ in range(30):
        n = int(rng.integers(3, 6))
        w = _random_weights(n, rng)
        base = all_msts(w)
        for g in (np.exp, lambda v: v ** 3 + v, lambda v: 3.0 * v + 1.0):
            if all_msts(EdgeVector(n, g(w.values))) != base:
                bad += 1
    return CheckResult("MST set invariant under increasing transforms", bad == 0,
                       f"{bad} mismatches in 90 transformed weights")


def check_fiber_samples(rng) -> CheckResult:
    bad = 0
    for _ in range(10):
        u = single_linkage(sample_ground_truth_metric(5, 100.0, rng))
        for tree in list(all_msts(u))[:2]:
            for _ in range(10):
                d = sample_fiber(u, tree, rng)
                if not np.array_equal(single_linkage(d).values, u.values):
                    bad += 1
    return CheckResult("fiber samples map back to their ultrametric", bad == 0,
                       f"{bad} escapes")


def check_dendrogram_roundtrip(rng) -> CheckResult:
    bad = 0
    for _ in range(200):
        n = int(rng.integers(3, 7))
        u = single_linkage(_random_weights(n, rng))
        if not np.array_equal(ultrametric_of(dendrogram_of(u)).values, u.values):
            bad += 1
    return CheckResult("dendrogram round-trip is exact", bad == 0,
                       f"{bad} failures in 200 random ultrametrics")


def check_mpple_matches_slhc(rng) -> CheckResult:
    model = get_model("lognormal", sigma=0.5)
    bad = 0
    for _ in range(500):
        theta = sample_ground_truth_metric(5, 100.0, rng)
        x = EdgeVector(5, model.sampler(theta.values, None, rng))
        if not np.array_equal(mpple(x, model).values, slhc_estimator(x).values):
            bad += 1
    return CheckResult("tree-profile estimate equals single linkage (log-normal)",
                       bad == 0, f"{bad} mismatches in 500 trials")


def check_lognormal_machinery(rng) -> CheckResult:
    model = get_model("lognormal", sigma=0.3)
    norm = max(normalization_residual(model, t) for t in (0.5, 2.0, 20.0))
    grid = np.linspace(0.05, 50.0, 500)
    report = monotonicity_report(model, grid)
    deriv = np.asarray(model.d_log_h(grid) +
                       model.natural_map(model.mle(grid)) * model.d_suff_stat(grid))
    deriv_ok = np.allclose(deriv, -1.0 / grid, rtol=1e-9)
    ok = norm < 1e-6 and report.reduces_to_single_linkage and \
        report.mle_is_identity and deriv_ok
    return CheckResult("log-normal density, MLE and profile-slope identities", ok,
                       f"normalization residual {norm:.1e}")


def check_consistency_trend(rng) -> CheckResult:
    model = get_model("lognormal", sigma=0.3)
    errs = {}
    for n_samples in (1, 256):
        total = 0.0
        for _ in range(200):
            theta = sample_ground_truth_metric(5, 100.0, rng)
            xs = model.sampler(theta.values, n_samples, rng)
            pooled = np.exp(np.mean(np.log(xs), axis=0))
            total += l1_error(single_linkage(EdgeVector(5, pooled)),
                              single_linkage(theta))
        errs[n_samples] = total / 200.0
    ok = errs[256] < 0.1 * errs[1]
    return CheckResult("pooled-MLE error shrinks with more rounds", ok,
                       f"mean l1 {errs[1]:.2f} -> {errs[256]:.3f}")


ALL_CHECKS: list[Callable] = [
    check_minimax_oracle,
    check_operator_axioms,
    check_mst_transform_invariance,
    check_fiber_samples,
    check_dendrogram_roundtrip,
    check_mpple_matches_slhc,
    check_lognormal_machinery,
    check_consistency_trend,
]


def run_property_checks(seed: int = 20240917) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    return [chk(rng) for chk in ALL_CHECKS]
