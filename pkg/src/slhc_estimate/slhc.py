"""The single-linkage operator and the geometry of its point preimages.

single_linkage sends a weight vector to the ultrametric of minimax path
costs; its fiber over an ultrametric u, intersected with the metric cone,
is a finite union of boxes [u, tree_metric] clipped by the triangle
inequalities, one box per MST of u.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .edges import EdgeVector, MetricVector, UltraMetric, is_metric, num_edges, pair_table
from .trees import (
    CapacityError,
    ENUMERATION_LIMIT,
    SpanningTree,
    mst,
    restrict,
    tree_metric,
    ultrametric_from_tree,
)

FIBER_TOL = 1e-12


class SamplingBudgetError(RuntimeError):
    """Rejection sampler ran out of attempts."""


def single_linkage(d: EdgeVector) -> UltraMetric:
    """Single-linkage hierarchical clustering of a weight vector.

    Computed as the path-maximum ultrametric of a minimum spanning tree;
    the result does not depend on which MST is used.  Output values are
    copies of input values (no arithmetic).
    """
    return ultrametric_from_tree(mst(d))


def minimax_path_bruteforce(d: EdgeVector) -> UltraMetric:
    """Independent oracle for single_linkage: for every pair, enumerate
    all simple paths recursively and take the minimum over paths of the
    maximum edge value.

    Branch-and-bound on the running maximum prunes paths that cannot
    improve the minimum; pruning never changes the result.  Desk scale
    only (n <= 8).
    """
    n = d.n
    if n > ENUMERATION_LIMIT:
        raise CapacityError(
            f"path enumeration supports n <= {ENUMERATION_LIMIT}, got {n}")
    vals = d.values
    out = np.zeros(num_edges(n))
    idx = {}
    for k, (i, j) in enumerate(pair_table(n)):
        idx[(int(i), int(j))] = k
        idx[(int(j), int(i))] = k

    def search(v: int, target: int, running: float, visited: int, best: float) -> float:
        for u in range(n):
            if visited >> u & 1:
                continue
            cost = vals[idx[(v, u)]]
            top = cost if cost > running else running
            if top >= best:
                continue
            if u == target:
                best = top
            else:
                best = search(u, target, top, visited | 1 << u, best)
        return best

    for k, (i, j) in enumerate(pair_table(n)):
        i, j = int(i), int(j)
        out[k] = search(i, j, 0.0, 1 << i, np.inf)
    return UltraMetric(n, out)


def is_mst(t: SpanningTree, w: EdgeVector) -> bool:
    """Whether t is a minimum spanning tree of w, decided coordinatewise:
    t is minimal iff w dominates the path-maximum ultrametric that t
    induces from w's own tree values."""
    if t.n != w.n:
        raise ValueError(f"point counts differ: {t.n} vs {w.n}")
    induced = ultrametric_from_tree(restrict(w, t))
    return bool(np.all(w.values >= induced.values))


def in_fiber(d: EdgeVector, u: UltraMetric, tol: float = FIBER_TOL) -> bool:
    """Whether single_linkage(d) equals u coordinatewise within tol."""
    if d.n != u.n:
        raise ValueError(f"point counts differ: {d.n} vs {u.n}")
    return bool(np.all(np.abs(single_linkage(d).values - u.values) <= tol))


def fiber_box(u: UltraMetric, t: SpanningTree) -> tuple[np.ndarray, np.ndarray]:
    """Coordinatewise bounds [u, tree_metric] of the fiber piece of u
    attached to the MST t.  Raises if t is not an MST of u."""
    if not is_mst(t, u):
        raise ValueError("tree is not a minimum spanning tree of the ultrametric")
    upper = tree_metric(restrict(u, t)).values
    return u.values.copy(), upper


def sample_fiber(u: UltraMetric, t: SpanningTree, rng: np.random.Generator,
                 max_attempts: int = 100_000) -> MetricVector:
    """Draw a metric d with single_linkage(d) = u, from the fiber piece
    attached to the MST t.

    Tree-edge coordinates are pinned to u; the rest are drawn uniformly
    in [u_e, tree_metric_e] and rejected until the triangle check passes.
    Any accepted point maps back to u exactly: it dominates u and agrees
    with u on t, so t stays an MST.
    """
    lower, upper = fiber_box(u, t)
    free = np.array([k for k in range(num_edges(u.n)) if k not in set(t.edges)])
    d = lower.copy()
    for _ in range(max_attempts):
        if free.size:
            d[free] = rng.uniform(lower[free], upper[free])
        candidate = EdgeVector(u.n, d)
        if is_metric(candidate):
            return MetricVector(u.n, candidate.values)
    raise SamplingBudgetError(
        f"no metric found in the fiber box after {max_attempts} attempts "
        f"(n={u.n}, tree={t.edges})")


def mst_energy(w: EdgeVector, g: Callable[[float], float]) -> float:
    """Sum of g over the edge values of a minimum spanning tree of w.

    Well defined: every MST of w carries the same multiset of values, so
    the choice of tree does not matter (asserted in tests, not assumed
    silently here beyond using the deterministic mst).
    """
    tw = mst(w)
    return float(sum(g(float(v)) for v in tw.weights))
