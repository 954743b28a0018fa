"""Dendrograms as (partition chain, merge heights) pairs, mutually
inverse with ultrametrics, plus the comparisons used by the simulation
harness: labelled structure equality and the l1 error."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .edges import UltraMetric, edge_index, num_edges, pair_table

Partition = tuple[tuple[int, ...], ...]


def _canonical(blocks) -> Partition:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def _refines(fine: Partition, coarse: Partition) -> bool:
    lookup = {}
    for b, block in enumerate(coarse):
        for x in block:
            lookup[x] = b
    return all(len({lookup[x] for x in block}) == 1 for block in fine)


@dataclass(frozen=True)
class Dendrogram:
    """Chain of partitions of {0..n-1} from singletons to one cluster,
    with one strictly increasing merge height per non-initial level.

    Edge values that tie across pairs merge simultaneously in a single
    level, so the representation is label-deterministic.
    """

    n: int
    partitions: tuple[Partition, ...]
    heights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "partitions",
                           tuple(_canonical(p) for p in self.partitions))
        object.__setattr__(self, "heights", tuple(float(h) for h in self.heights))
        parts, heights = self.partitions, self.heights
        if len(parts) < 2 and self.n > 1:
            raise ValueError("chain needs at least the discrete and full partitions")
        if len(heights) != len(parts) - 1:
            raise ValueError("need exactly one height per non-initial partition")
        if parts[0] != tuple((x,) for x in range(self.n)):
            raise ValueError("chain must start at the discrete partition")
        if parts[-1] != (tuple(range(self.n)),):
            raise ValueError("chain must end at the single-cluster partition")
        for fine, coarse in zip(parts, parts[1:]):
            if fine == coarse or not _refines(fine, coarse):
                raise ValueError("each partition must strictly refine its successor")
        if any(b >= a for a, b in zip(heights[1:], heights)):
            raise ValueError("merge heights must be strictly increasing")
        if heights and heights[0] < 0:
            raise ValueError("merge heights must be nonnegative")

    @property
    def structure(self) -> tuple[Partition, ...]:
        """The partition chain with heights forgotten."""
        return self.partitions

    def to_newick(self) -> str:
        """Nested-list rendering with merge heights, for inspection."""

        def render(block: tuple[int, ...], level: int) -> str:
            if len(block) == 1:
                return str(block[0])
            # the block forms at level lo+1, where lo is the highest
            # level at which it is still split
            for lo in range(level - 1, -1, -1):
                children = [b for b in self.partitions[lo] if set(b) <= set(block)]
                if len(children) > 1:
                    inner = ",".join(render(c, lo) for c in children)
                    return f"({inner}):{self.heights[lo]!r}"
            raise AssertionError("unreachable: chain starts at singletons")

        root = self.partitions[-1][0]
        return render(root, len(self.partitions) - 1) + ";"


def dendrogram_of(u: UltraMetric) -> Dendrogram:
    """Partition chain of u: clusters at resolution r are the components
    of the graph keeping pairs with value <= r, one level per distinct
    value of u."""
    n = u.n
    table = pair_table(n)
    order = np.argsort(u.values, kind="stable")
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    partitions = [tuple((x,) for x in range(n))]
    heights: list[float] = []
    k = 0
    while k < len(order):
        level = u.values[order[k]]
        while k < len(order) and u.values[order[k]] == level:
            i, j = table[order[k]]
            ri, rj = find(int(i)), find(int(j))
            if ri != rj:
                parent[ri] = rj
            k += 1
        blocks: dict[int, list[int]] = {}
        for x in range(n):
            blocks.setdefault(find(x), []).append(x)
        partition = _canonical(blocks.values())
        if partition != partitions[-1]:
            partitions.append(partition)
            heights.append(float(level))
    return Dendrogram(n, tuple(partitions), tuple(heights))


def ultrametric_of(d: Dendrogram) -> UltraMetric:
    """Inverse of dendrogram_of: the value at (x, y) is the height of the
    first partition in the chain putting x and y in one cluster."""
    n = d.n
    vals = np.zeros(num_edges(n))
    placed = np.zeros(num_edges(n), dtype=bool)
    for level, partition in enumerate(d.partitions[1:]):
        h = d.heights[level]
        for block in partition:
            for a in range(len(block)):
                for b in range(a + 1, len(block)):
                    k = edge_index(block[a], block[b], n)
                    if not placed[k]:
                        placed[k] = True
                        vals[k] = h
    return UltraMetric(n, vals)


def same_structure(u1: UltraMetric, u2: UltraMetric) -> bool:
    """Whether the two ultrametrics produce the same ordered chain of
    labelled partitions (merge heights ignored)."""
    if u1.n != u2.n:
        raise ValueError(f"point counts differ: {u1.n} vs {u2.n}")
    return dendrogram_of(u1).structure == dendrogram_of(u2).structure


def l1_error(u1: UltraMetric, u2: UltraMetric) -> float:
    """Sum over edges of |u1_e - u2_e|."""
    if u1.n != u2.n:
        raise ValueError(f"point counts differ: {u1.n} vs {u2.n}")
    return float(np.sum(np.abs(u1.values - u2.values)))
