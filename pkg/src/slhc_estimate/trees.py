"""Spanning trees of K_n: minimum spanning trees, desk-scale enumeration,
and the two maps sending a weighted tree to an ultrametric (path maxima)
or to a tree metric (path sums)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator

import numpy as np

from .edges import (
    EdgeVector,
    MetricVector,
    UltraMetric,
    edge_index,
    num_edges,
    pair_table,
)

# 8^6 = 262144 trees keeps full enumeration under a second.
ENUMERATION_LIMIT = 8

# Two spanning trees tie as MSTs when their totals agree to this much.
MST_TOTAL_TOL = 1e-12


class CapacityError(ValueError):
    """Raised when an exhaustive-enumeration operation is asked to run
    beyond its desk-scale bound."""


@dataclass(frozen=True)
class SpanningTree:
    """A spanning tree of K_n, stored as a sorted tuple of edge indices."""

    n: int
    edges: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))
        if len(self.edges) != self.n - 1 or len(set(self.edges)) != self.n - 1:
            raise ValueError(f"a spanning tree on {self.n} points needs "
                             f"{self.n - 1} distinct edges")
        m = num_edges(self.n)
        if any(not 0 <= e < m for e in self.edges):
            raise ValueError("edge index out of range")
        if not self._spans():
            raise ValueError("edges do not form a spanning tree")

    def _spans(self) -> bool:
        parent = list(range(self.n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        table = pair_table(self.n)
        merged = 0
        for e in self.edges:
            i, j = table[e]
            ri, rj = find(int(i)), find(int(j))
            if ri == rj:
                return False
            parent[ri] = rj
            merged += 1
        return merged == self.n - 1

    def edge_pairs(self) -> list[tuple[int, int]]:
        table = pair_table(self.n)
        return [(int(table[e][0]), int(table[e][1])) for e in self.edges]

    def to_text(self) -> str:
        return f"n={self.n} edges={','.join(map(str, self.edges))}"

    @classmethod
    def from_text(cls, text: str) -> "SpanningTree":
        fields = dict(part.split("=") for part in text.split())
        return cls(int(fields["n"]),
                   tuple(int(e) for e in fields["edges"].split(",")))


@dataclass(frozen=True, eq=False)
class WeightedSpanningTree:
    """A spanning tree with one nonnegative weight per edge, aligned with
    the tree's sorted edge order."""

    tree: SpanningTree
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64).copy()
        if w.shape != (self.tree.n - 1,):
            raise ValueError(f"need {self.tree.n - 1} weights, got {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("tree weights must be finite and nonnegative")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.tree.n

    def total_weight(self) -> float:
        return float(self.weights.sum())

    def weight_of(self, edge: int) -> float:
        return float(self.weights[self.tree.edges.index(edge)])


def restrict(w: EdgeVector, tree: SpanningTree) -> WeightedSpanningTree:
    """Weighted tree carrying w's values on the tree's edges."""
    if w.n != tree.n:
        raise ValueError(f"point counts differ: {w.n} vs {tree.n}")
    return WeightedSpanningTree(tree, w.values[list(tree.edges)])


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def mst(w: EdgeVector) -> WeightedSpanningTree:
    """Kruskal with a stable sort, so ties break toward the lower edge
    index and the output is deterministic on non-generic inputs."""
    order = np.argsort(w.values, kind="stable")
    table = pair_table(w.n)
    uf = _UnionFind(w.n)
    picked = []
    for e in order:
        i, j = table[e]
        if uf.union(int(i), int(j)):
            picked.append(int(e))
            if len(picked) == w.n - 1:
                break
    tree = SpanningTree(w.n, tuple(picked))
    return restrict(w, tree)


def _prufer_decode(seq: tuple[int, ...], n: int) -> tuple[int, ...]:
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    # smallest-leaf elimination
    ptr = 0
    leaf = -1
    for v in seq:
        if leaf < 0:
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
        edges.append(edge_index(leaf, v, n))
        degree[leaf] -= 1
        degree[v] -= 1
        if degree[v] == 1 and v < ptr:
            leaf = v
        else:
            leaf = -1
    last = [v for v in range(n) if degree[v] == 1]
    edges.append(edge_index(last[0], last[1], n))
    return tuple(edges)


@lru_cache(maxsize=None)
def spanning_tree_edge_matrix(n: int) -> np.ndarray:
    """(n^(n-2), n-1) array of edge indices, one row per spanning tree of
    K_n, in lexicographic order of the generating sequence."""
    if not 2 <= n <= ENUMERATION_LIMIT:
        raise CapacityError(
            f"full tree enumeration supports 2 <= n <= {ENUMERATION_LIMIT}, got {n}")
    rows = [sorted(_prufer_decode(seq, n))
            for seq in product(range(n), repeat=n - 2)]
    out = np.array(rows, dtype=np.intp).reshape(len(rows), n - 1)
    out.setflags(write=False)
    return out


def all_spanning_trees(n: int) -> Iterator[SpanningTree]:
    """Yield every spanning tree of K_n (n^(n-2) of them), desk scale."""
    for row in spanning_tree_edge_matrix(n):
        yield SpanningTree(n, tuple(int(e) for e in row))


def all_msts(w: EdgeVector) -> set[SpanningTree]:
    """Every spanning tree whose total weight ties the minimum, by
    exhaustive enumeration.  Generic weights give a singleton."""
    matrix = spanning_tree_edge_matrix(w.n)
    totals = w.values[matrix].sum(axis=1)
    cutoff = totals.min() + MST_TOTAL_TOL
    return {SpanningTree(w.n, tuple(int(e) for e in matrix[k]))
            for k in np.nonzero(totals <= cutoff)[0]}


def kruskal_distance(t1: SpanningTree, t2: SpanningTree) -> int:
    """Number of edges of t1 not in t2 (symmetric for same-size trees)."""
    if t1.n != t2.n:
        raise ValueError(f"point counts differ: {t1.n} vs {t2.n}")
    return len(set(t1.edges) - set(t2.edges))


def _adjacency(tw: WeightedSpanningTree) -> list[list[tuple[int, float, int]]]:
    """Per-vertex list of (neighbor, weight, edge index)."""
    adj: list[list[tuple[int, float, int]]] = [[] for _ in range(tw.n)]
    table = pair_table(tw.n)
    for e, wt in zip(tw.tree.edges, tw.weights):
        i, j = int(table[e][0]), int(table[e][1])
        adj[i].append((j, float(wt), e))
        adj[j].append((i, float(wt), e))
    return adj


def ultrametric_from_tree(tw: WeightedSpanningTree) -> UltraMetric:
    """Ultrametric whose (x, y) value is the largest weight on the unique
    tree path joining x and y.  Values are copies of tree weights, so the
    ultrametric inequality holds exactly."""
    n = tw.n
    adj = _adjacency(tw)
    out = np.zeros(num_edges(n))
    for root in range(n):
        stack = [(root, 0.0)]
        seen = [False] * n
        seen[root] = True
        while stack:
            v, running = stack.pop()
            for u, wt, _ in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    top = wt if wt > running else running
                    if u > root:
                        out[edge_index(root, u, n)] = top
                    stack.append((u, top))
    return UltraMetric(n, out)


def tree_metric(tw: WeightedSpanningTree) -> MetricVector:
    """Tree metric whose (x, y) value is the sum of weights on the tree
    path joining x and y.

    Independently rounded path sums can miss the exact triangle check by
    an ulp on colinear triples, so the raw sums are tightened to their
    min-plus closure (changes values at the last-bit level only).
    """
    n = tw.n
    adj = _adjacency(tw)
    dist = np.zeros((n, n))
    for root in range(n):
        stack = [(root, 0.0)]
        seen = [False] * n
        seen[root] = True
        while stack:
            v, running = stack.pop()
            for u, wt, _ in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    dist[root, u] = running + wt
                    stack.append((u, running + wt))
    dist = np.minimum(dist, dist.T)
    while True:
        closed = np.minimum(dist, (dist[:, :, None] + dist[None, :, :]).min(axis=1))
        if np.array_equal(closed, dist):
            break
        dist = closed
    table = pair_table(n)
    return MetricVector(n, dist[table[:, 0], table[:, 1]])


def path_edges(t: SpanningTree, x: int, y: int) -> list[int]:
    """Edge indices along the unique tree path from x to y, in order."""
    if x == y:
        raise ValueError("path endpoints must be distinct")
    if not (0 <= x < t.n and 0 <= y < t.n):
        raise ValueError(f"point ids must lie in [0, {t.n})")
    adj = _adjacency(WeightedSpanningTree(t, np.zeros(t.n - 1)))
    prev: dict[int, tuple[int, int]] = {}
    stack = [x]
    seen = [False] * t.n
    seen[x] = True
    while stack:
        v = stack.pop()
        if v == y:
            break
        for u, _, e in adj[v]:
            if not seen[u]:
                seen[u] = True
                prev[u] = (v, e)
                stack.append(u)
    path = []
    v = y
    while v != x:
        v, e = prev[v]
        path.append(e)
    path.reverse()
    return path
