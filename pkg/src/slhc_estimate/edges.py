"""Edge-indexed vectors over the complete graph on n points.

A vector assigns one nonnegative value to each unordered pair (i, j),
i < j, in lexicographic order.  This is the shared coordinate system for
dissimilarity data, ground-truth metrics, measurements and ultrametrics.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


def num_edges(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(i: int, j: int, n: int) -> int:
    """Position of the unordered pair {i, j} in lexicographic edge order.

    Symmetric in (i, j).  Raises ValueError for i == j or ids outside
    [0, n).
    """
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"point ids must lie in [0, {n}), got ({i}, {j})")
    if i == j:
        raise ValueError(f"pair requires two distinct points, got ({i}, {j})")
    if i > j:
        i, j = j, i
    return i * n - i * (i + 1) // 2 + (j - i - 1)


@lru_cache(maxsize=None)
def pair_table(n: int) -> np.ndarray:
    """(m, 2) array mapping edge index -> (i, j), i < j, lexicographic."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = np.array(pairs, dtype=np.intp)
    out.setflags(write=False)
    return out


def edge_pair(k: int, n: int) -> tuple[int, int]:
    """Inverse of edge_index."""
    m = num_edges(n)
    if not 0 <= k < m:
        raise ValueError(f"edge index {k} out of range for n={n}")
    i, j = pair_table(n)[k]
    return int(i), int(j)


@lru_cache(maxsize=None)
def _triple_indices(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Edge indices (ab, ac, bc) for every unordered point triple a<b<c."""
    ab, ac, bc = [], [], []
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                ab.append(edge_index(a, b, n))
                ac.append(edge_index(a, c, n))
                bc.append(edge_index(b, c, n))
    return (np.array(ab, dtype=np.intp),
            np.array(ac, dtype=np.intp),
            np.array(bc, dtype=np.intp))


def triangle_holds(values: np.ndarray, n: int) -> bool:
    """All n(n-1)(n-2)/2 triangle inequalities, non-strict, exact."""
    if n < 3:
        return True
    ab, ac, bc = _triple_indices(n)
    v = values
    return bool(
        np.all(v[bc] <= v[ab] + v[ac])
        and np.all(v[ac] <= v[ab] + v[bc])
        and np.all(v[ab] <= v[ac] + v[bc])
    )


def triangle_mask(batch: np.ndarray, n: int) -> np.ndarray:
    """Row mask of triangle_holds over a (rows, num_edges) batch."""
    if n < 3:
        return np.ones(batch.shape[0], dtype=bool)
    ab, ac, bc = _triple_indices(n)
    v = batch
    ok = np.all(v[:, bc] <= v[:, ab] + v[:, ac], axis=1)
    ok &= np.all(v[:, ac] <= v[:, ab] + v[:, bc], axis=1)
    ok &= np.all(v[:, ab] <= v[:, ac] + v[:, bc], axis=1)
    return ok


def ultrametric_holds(values: np.ndarray, n: int, tol: float = 0.0) -> bool:
    """d_xz <= max(d_xy, d_yz) + tol for every triple.

    Equivalent form: within each triple, the largest value exceeds the
    second largest by at most tol.
    """
    if n < 3:
        return True
    ab, ac, bc = _triple_indices(n)
    trip = np.sort(np.stack([values[ab], values[ac], values[bc]], axis=1), axis=1)
    return bool(np.all(trip[:, 2] <= trip[:, 1] + tol))


@dataclass(frozen=True, eq=False)
class EdgeVector:
    """Nonnegative values on the edges of K_n, lexicographic pair order."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"need an integer point count >= 2, got {self.n!r}")
        vals = np.asarray(self.values, dtype=np.float64).copy()
        if vals.shape != (num_edges(self.n),):
            raise ValueError(
                f"expected {num_edges(self.n)} edge values for n={self.n}, "
                f"got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("edge values must be finite")
        if np.any(vals < 0):
            raise ValueError("edge values must be nonnegative")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def value(self, i: int, j: int) -> float:
        return float(self.values[edge_index(i, j, self.n)])

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, values={self.values.tolist()})"


@dataclass(frozen=True, eq=False)
class MetricVector(EdgeVector):
    """EdgeVector satisfying the triangle inequality on every triple."""

    def __post_init__(self):
        super().__post_init__()
        if not triangle_holds(self.values, self.n):
            raise ValueError("values violate the triangle inequality")


@dataclass(frozen=True, eq=False)
class UltraMetric(MetricVector):
    """EdgeVector satisfying the ultrametric inequality on every triple."""

    def __post_init__(self):
        super().__post_init__()
        if not ultrametric_holds(self.values, self.n, tol=0.0):
            raise ValueError("values violate the ultrametric inequality")


def is_metric(w: EdgeVector) -> bool:
    return triangle_holds(w.values, w.n)


def is_ultrametric(w: EdgeVector, tol: float = 0.0) -> bool:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return ultrametric_holds(w.values, w.n, tol)


def is_generic(w: EdgeVector) -> bool:
    """True when no two edge values coincide."""
    return len(np.unique(w.values)) == len(w.values)


def write_edge_vector(vec: EdgeVector, path) -> None:
    """Plain-text fixture format: `n=<count>` then one `i j value` line
    per edge in lexicographic order.  Floats use repr so a round-trip is
    exact."""
    with open(path, "w") as fh:
        _dump(vec, fh)


def _dump(vec: EdgeVector, fh: io.TextIOBase) -> None:
    fh.write(f"n={vec.n}\n")
    for k, (i, j) in enumerate(pair_table(vec.n)):
        fh.write(f"{i} {j} {float(vec.values[k])!r}\n")


def dumps_edge_vector(vec: EdgeVector) -> str:
    buf = io.StringIO()
    _dump(vec, buf)
    return buf.getvalue()


def read_edge_vector(path) -> EdgeVector:
    with open(path) as fh:
        return loads_edge_vector(fh.read())


def loads_edge_vector(text: str) -> EdgeVector:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n="):
        raise ValueError("fixture must start with an 'n=<count>' header line")
    n = int(lines[0][2:])
    vals = np.zeros(num_edges(n))
    seen = np.zeros(num_edges(n), dtype=bool)
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"malformed edge line: {ln!r}")
        i, j, v = int(parts[0]), int(parts[1]), float(parts[2])
        k = edge_index(i, j, n)
        if seen[k]:
            raise ValueError(f"duplicate edge ({i}, {j})")
        seen[k] = True
        vals[k] = v
    if not seen.all():
        raise ValueError("fixture is missing edges")
    return EdgeVector(n, vals)


def as_metric(w: EdgeVector) -> MetricVector:
    return MetricVector(w.n, w.values)


def as_ultrametric(w: EdgeVector) -> UltraMetric:
    return UltraMetric(w.n, w.values)
