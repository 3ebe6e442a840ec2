"""On-line nearest-neighbour graph (ONG) construction and weights.

Points arrive one at a time in the open unit cube; every arrival after
the first is joined to its nearest predecessor in Euclidean distance,
ties broken by the lexicographic order on coordinates.  Two rooted
variants exist in dimension one: `rooted0` prepends the point 0, and
`rooted01` prepends 0 and 1 (whose own edge, 1 -> 0, has length 1 and is
part of the graph).

The one-dimensional nearest-neighbour *directed* graph (every point
joined to its nearest neighbour, regardless of arrival order) is also
provided, since its total weight reduces to a spacings expression.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError

VARIANTS = ("plain", "rooted0", "rooted01")
VARIANT_CODE = {"plain": _kernels.PLAIN, "rooted0": _kernels.ROOTED0,
                "rooted01": _kernels.ROOTED01}

# below this size the naive scan beats building a grid
_GRID_MIN_POINTS = 64


@dataclass(frozen=True)
class PointSequence:
    """An ordered sequence of points in (0,1)^d; order is arrival order."""

    points: np.ndarray  # (n, d), every coordinate strictly inside (0,1)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise DomainError("PointSequence needs a non-empty (n, d) array")
        if not np.all(np.isfinite(pts)):
            raise DomainError("PointSequence coordinates must be finite")
        if pts.min() <= 0.0 or pts.max() >= 1.0:
            raise DomainError("PointSequence coordinates must lie strictly inside (0,1)")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class OngGraph:
    """One ONG realization: arrival-indexed parents and edge lengths.

    Arrival 0 is the root (parent -1, edge length 0); every other
    arrival i has parent[i] < i and edge_length[i] equal to the distance
    to that parent.  For rooted variants the arrivals include the
    prepended root points.
    """

    points: np.ndarray        # (m, d) including any roots
    parent: np.ndarray        # (m,) int64, parent[0] == -1
    edge_length: np.ndarray   # (m,) float64, edge_length[0] == 0.0
    variant: str = "plain"
    has_duplicates: bool = False

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def n_edges(self) -> int:
        return self.points.shape[0] - 1


@dataclass(frozen=True)
class IncrementTrace:
    """Per-arrival edge lengths Z_i / H_i / T_i for the n uniform arrivals.

    values[0] corresponds to the first uniform; for the plain variant it
    is 0 by convention (the first point creates no edge).  The rooted01
    trace excludes the fixed unit edge from 1 to 0, so the total weight
    of the prefix-k graph is 1 + sum of the first k powered values.
    """

    variant: str
    values: np.ndarray


def build_ong(seq, variant: str = "plain", method: str = "auto") -> OngGraph:
    """Construct the ONG of a point sequence.

    `method` picks the nearest-predecessor search: "sorted" (d = 1
    reverse sweep), "grid" (d >= 2 uniform grid), "naive" (the O(n^2)
    oracle, any d), or "auto".  All methods produce identical graphs on
    inputs with distinct pairwise distances.
    """
    seq = _as_sequence(seq)
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}")
    if variant != "plain" and seq.dim != 1:
        raise DomainError("rooted variants are defined only in dimension 1")

    pts = _augment(seq, variant)
    m, d = pts.shape
    start = 1 if variant != "rooted01" else 2
    parent = np.full(m, -1, np.int64)
    elen = np.zeros(m)
    if variant == "rooted01":
        parent[1] = 0
        elen[1] = 1.0

    if method == "auto":
        method = "sorted" if d == 1 else ("grid" if m >= _GRID_MIN_POINTS else "naive")
    if method == "sorted":
        if d != 1:
            raise DomainError("method 'sorted' requires dimension 1")
        _kernels.sweep_1d(np.ascontiguousarray(pts[:, 0]), start, parent, elen)
    elif method == "grid":
        _kernels.grid_build(np.ascontiguousarray(pts), start, parent, elen)
    elif method == "naive":
        _kernels.naive_scan(np.ascontiguousarray(pts), start, parent, elen)
    else:
        raise DomainError(f"unknown method {method!r}")

    return OngGraph(points=pts, parent=parent, edge_length=elen, variant=variant,
                    has_duplicates=_any_duplicates(pts))


def total_weight(graph: OngGraph, alpha: float) -> float:
    """Sum of edge lengths raised to alpha (alpha = 0 counts edges)."""
    if alpha < 0.0:
        raise DomainError(f"total_weight requires alpha >= 0, got {alpha!r}")
    e = graph.edge_length[1:]
    if alpha == 0.0:
        return float(e.size)
    return float(np.sum(e ** alpha))


def increments(seq, variant: str = "plain") -> IncrementTrace:
    """Edge length contributed by each uniform arrival, in arrival order."""
    seq = _as_sequence(seq)
    graph = build_ong(seq, variant)
    if variant == "plain":
        values = graph.edge_length.copy()      # [0, Z_2, ..., Z_n]
    elif variant == "rooted0":
        values = graph.edge_length[1:].copy()  # H_1, ..., H_n
    else:
        values = graph.edge_length[2:].copy()  # T_1, ..., T_n (unit edge excluded)
    return IncrementTrace(variant=variant, values=values)


def nn_directed_total(points, alpha: float) -> float:
    """Total weight of the 1-D nearest-neighbour directed graph.

    Every point sends an edge to its nearest neighbour; in sorted order
    the two extreme points reach inward and each interior point takes
    the smaller adjacent spacing, so the total is a spacings expression.
    """
    x = np.sort(np.asarray(points, dtype=np.float64).ravel())
    n = x.size
    if n < 2:
        raise DomainError("nn_directed_total needs at least 2 points")
    if np.any(np.diff(x) == 0.0):
        raise DomainError("nn_directed_total requires distinct points")
    if not alpha > 0.0:
        raise DomainError(f"nn_directed_total requires alpha > 0, got {alpha!r}")
    s = np.diff(x, prepend=0.0, append=1.0)  # spacings S_1..S_{n+1}
    total = s[1] ** alpha + s[n - 1] ** alpha
    if n >= 3:
        total += float(np.sum(np.minimum(s[1:n - 1], s[2:n]) ** alpha))
    return float(total)


def nn_directed_total_direct(points, alpha: float) -> float:
    """Per-point-definition cross-check for nn_directed_total."""
    x = np.asarray(points, dtype=np.float64).ravel()
    n = x.size
    if n < 2:
        raise DomainError("nn_directed_total needs at least 2 points")
    diffs = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(diffs, np.inf)
    return float(np.sum(diffs.min(axis=1) ** alpha))


def write_edge_csv(graph: OngGraph, path) -> None:
    """Edge list as CSV (child_index, parent_index, length), UTF-8."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["child_index", "parent_index", "length"])
        for i in range(1, graph.n_points):
            w.writerow([i, int(graph.parent[i]), repr(float(graph.edge_length[i]))])


def _as_sequence(seq) -> PointSequence:
    if isinstance(seq, PointSequence):
        return seq
    return PointSequence(np.asarray(seq))


def _augment(seq: PointSequence, variant: str) -> np.ndarray:
    if variant == "plain":
        return seq.points
    roots = [[0.0]] if variant == "rooted0" else [[0.0], [1.0]]
    return np.vstack([np.array(roots), seq.points])


def _any_duplicates(pts: np.ndarray) -> bool:
    if pts.shape[0] < 2:
        return False
    order = np.lexsort(pts.T[::-1])
    srt = pts[order]
    return bool(np.any(np.all(srt[1:] == srt[:-1], axis=1)))
