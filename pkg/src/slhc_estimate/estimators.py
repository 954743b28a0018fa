"""Estimators of the single-linkage ultrametric of an unknown metric from
noisy edge measurements.

Three routes are provided: single linkage applied directly to one
measurement vector; the tree-profile estimator (MPPLE) that maximizes the
on-tree measurement likelihood over weighted spanning trees; and single
linkage applied to per-edge multi-sample MLEs, which is consistent as the
number of measurement rounds grows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .edges import EdgeVector, UltraMetric, num_edges
from .noise import NoiseModel, log_density, log_g, mle_theta, multi_sample_mle, sample
from .slhc import single_linkage
from .trees import (
    ENUMERATION_LIMIT,
    CapacityError,
    SpanningTree,
    WeightedSpanningTree,
    all_msts,
    mst,
    ultrametric_from_tree,
)


def slhc_estimator(x: EdgeVector) -> UltraMetric:
    """Single linkage applied directly to the measurement vector."""
    return single_linkage(x)


def mpple(x: EdgeVector, m: NoiseModel) -> UltraMetric:
    """Maximum partial profile likelihood estimate of the ultrametric.

    Score every edge by the profile log-density of its measurement, take
    a maximum-total-score spanning tree, put the per-edge MLE on its
    edges, and close up to an ultrametric by path maxima.  The maximum
    spanning tree is computed as the minimum spanning tree of the negated
    scores, so tie-breaking matches the rest of the package.
    """
    scores = np.asarray(log_g(m, x.values), dtype=np.float64)
    shift = scores.max()
    best = mst(EdgeVector(x.n, shift - scores)).tree
    theta_hat = np.asarray(mle_theta(m, x.values), dtype=np.float64)
    tree_vals = theta_hat[list(best.edges)]
    return ultrametric_from_tree(WeightedSpanningTree(best, tree_vals))


def consistent_estimator(samples: Sequence[EdgeVector] | np.ndarray,
                         m: NoiseModel) -> UltraMetric:
    """Single linkage of the per-edge joint MLE over measurement rounds."""
    stack = _as_stack(samples)
    n = _n_from_edges(stack.shape[1])
    pooled = multi_sample_mle(m, stack)
    return single_linkage(EdgeVector(n, pooled))


def _as_stack(samples) -> np.ndarray:
    if isinstance(samples, np.ndarray):
        stack = np.asarray(samples, dtype=np.float64)
        if stack.ndim != 2 or stack.shape[0] < 1:
            raise ValueError("need a (num_samples, num_edges) array")
        return stack
    vecs = list(samples)
    if not vecs:
        raise ValueError("need at least one measurement vector")
    n = vecs[0].n
    if any(v.n != n for v in vecs):
        raise ValueError("measurement vectors disagree on the point count")
    return np.stack([v.values for v in vecs])


def _n_from_edges(m: int) -> int:
    n = round((1 + (1 + 8 * m) ** 0.5) / 2)
    if num_edges(n) != m:
        raise ValueError(f"{m} is not a valid edge count")
    return n


def partial_profile_loglik(u: UltraMetric, x: EdgeVector, m: NoiseModel) -> float:
    """Largest on-tree log-likelihood of x over the MSTs of u, with the
    tree-edge parameters pinned to u.  Enumerates MSTs exhaustively, so
    desk scale only."""
    if u.n != x.n:
        raise ValueError(f"point counts differ: {u.n} vs {x.n}")
    if u.n > ENUMERATION_LIMIT:
        raise CapacityError(
            f"MST enumeration supports n <= {ENUMERATION_LIMIT}, got {u.n}")
    best = -np.inf
    for tree in all_msts(u):
        edges = list(tree.edges)
        total = float(np.sum(log_density(m, u.values[edges], x.values[edges])))
        if total > best:
            best = total
    return best


def onoff_split(x: EdgeVector, t: SpanningTree) -> tuple[np.ndarray, np.ndarray]:
    """Split edge values into (on-tree, off-tree), each in increasing
    edge-index order.  Reassembling by index recovers x."""
    if x.n != t.n:
        raise ValueError(f"point counts differ: {x.n} vs {t.n}")
    on = np.array(sorted(t.edges), dtype=np.intp)
    mask = np.ones(num_edges(x.n), dtype=bool)
    mask[on] = False
    return x.values[on].copy(), x.values[mask].copy()


@dataclass(frozen=True)
class FactorizationCheck:
    """Monte Carlo evidence that on-tree and off-tree measurement blocks
    decouple once the latent metric is drawn from a fiber piece."""

    correlation: float
    samples: int
    acceptance_rate: float


def onoff_likelihood_correlation(u: UltraMetric, t: SpanningTree, m: NoiseModel,
                                 samples: int, rng: np.random.Generator,
                                 batch: int = 4096) -> FactorizationCheck:
    """Draw latent metrics from the fiber piece of (u, t) by rejection,
    draw one measurement vector per latent metric, and correlate the
    on-tree log-likelihood (a function of the on-tree block only, with
    parameters pinned to u) against the off-tree log-likelihood evaluated
    at the fiber's lower corner (a function of the off-tree block only).

    The rejection sampler draws off-tree coordinates uniformly in the
    fiber box; its acceptance rate is reported rather than claimed to be
    a uniform sample of the metric piece.
    """
    from .edges import triangle_mask
    from .slhc import fiber_box

    lower, upper = fiber_box(u, t)
    n = u.n
    on = np.array(sorted(t.edges), dtype=np.intp)
    off = np.array([k for k in range(num_edges(n)) if k not in set(t.edges)],
                   dtype=np.intp)

    thetas = np.empty((samples, num_edges(n)))
    got = 0
    attempts = 0
    while got < samples:
        cand = np.tile(lower, (batch, 1))
        cand[:, off] = rng.uniform(lower[off], upper[off], size=(batch, len(off)))
        keep = triangle_mask(cand, n)
        attempts += batch
        take = min(int(keep.sum()), samples - got)
        thetas[got:got + take] = cand[keep][:take]
        got += take

    xs = sample(m, thetas, rng)
    on_ll = np.sum(log_density(m, u.values[on], xs[:, on]), axis=1)
    off_ll = np.sum(log_density(m, lower[off], xs[:, off]), axis=1)
    corr = float(np.corrcoef(on_ll, off_ll)[0, 1])
    return FactorizationCheck(correlation=corr, samples=samples,
                              acceptance_rate=got / attempts)
