"""Weighted-graph representation and normalized-cut cost arithmetic.

A view is one undirected weighted graph over the shared vertex set, stored as
a dense symmetric nonnegative matrix with a zero diagonal.  Graphs are built
either from raw affinity matrices or from region time series via Fisher
z-transformed Pearson correlations with negative weights zeroed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    InvalidCluster,
    IsolatedVertex,
    ZeroVarianceColumn,
    ZeroVolumeCluster,
)

# Correlations are clamped to +-(1 - FISHER_CLAMP) before atanh so that
# perfectly correlated columns stay finite.
FISHER_CLAMP = 1e-7

# Asymmetry beyond this (relative to the largest entry) triggers a warning
# before the matrix is symmetrized.
ASYMMETRY_WARN = 1e-8

COMBINATORIAL = "combinatorial"
SYMMETRIC_NORMALIZED = "symmetric-normalized"
_LAPLACIAN_KINDS = (COMBINATORIAL, SYMMETRIC_NORMALIZED)


@dataclass(frozen=True, eq=False)
class ViewGraph:
    """One view: a dense symmetric nonnegative affinity matrix.

    Instances are immutable; the weight matrix is marked read-only so views
    can be shared freely across threads.
    """

    n: int
    weights: np.ndarray
    label: str | None = None

    @classmethod
    def from_weights(cls, weights, label: str | None = None) -> "ViewGraph":
        """Validate, symmetrize and freeze a raw affinity matrix.

        The matrix must be square with finite nonnegative entries.  Asymmetry
        above ``ASYMMETRY_WARN`` (relative) is tolerated with a warning and
        averaged away; the diagonal is forced to zero.
        """
        w = np.array(weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DimensionError(f"affinity matrix must be square, got {w.shape}")
        if w.shape[0] < 2:
            raise DimensionError("graph needs at least 2 vertices")
        if not np.all(np.isfinite(w)):
            raise ValueError("affinity matrix contains non-finite entries")
        scale = float(np.abs(w).max())
        asym = float(np.abs(w - w.T).max())
        if scale > 0 and asym > ASYMMETRY_WARN * scale:
            warnings.warn(
                f"asymmetry {asym:.3e} exceeds {ASYMMETRY_WARN:.0e} of scale; "
                "symmetrizing",
                stacklevel=2,
            )
        w = 0.5 * (w + w.T)
        if float(w.min()) < 0.0:
            raise ValueError("affinity matrix has negative entries")
        np.fill_diagonal(w, 0.0)
        w.setflags(write=False)
        return cls(n=w.shape[0], weights=w, label=label)


@dataclass(frozen=True, eq=False)
class Laplacian:
    """Graph Laplacian together with the normalization it was built with."""

    matrix: np.ndarray
    kind: str


@dataclass(frozen=True, eq=False)
class Partition:
    """Hard assignment of every vertex to one of k clusters (ids 1..k)."""

    assignment: np.ndarray
    k: int

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64)
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)
        if a.ndim != 1:
            raise DimensionError("assignment must be a 1-d vector")
        present = set(np.unique(a).tolist())
        expected = set(range(1, self.k + 1))
        if present != expected:
            raise InvalidCluster(
                f"assignment uses ids {sorted(present)}, expected exactly 1..{self.k}"
            )

    @property
    def n(self) -> int:
        return self.assignment.shape[0]

    def indicator(self) -> np.ndarray:
        """n x k binary matrix with one 1 per row."""
        x = np.zeros((self.n, self.k))
        x[np.arange(self.n), self.assignment - 1] = 1.0
        return x


def graph_from_timeseries(series, label: str | None = None) -> ViewGraph:
    """Build an affinity graph from region time series.

    Pairwise Pearson correlations between columns are clamped to
    ``+-(1 - FISHER_CLAMP)``, Fisher z-transformed (atanh), and negative
    values are zeroed.  The diagonal is zero.

    Args:
        series: T x n array, one column of T samples per region.
        label: optional view identifier.

    Raises:
        DimensionError: fewer than 3 samples or fewer than 2 regions.
        ZeroVarianceColumn: some column is constant.
    """
    ts = np.asarray(series, dtype=np.float64)
    if ts.ndim != 2:
        raise DimensionError(f"time series must be 2-d, got shape {ts.shape}")
    t, n = ts.shape
    if t < 3:
        raise DimensionError(f"need at least 3 time points, got {t}")
    if n < 2:
        raise DimensionError(f"need at least 2 regions, got {n}")
    if not np.all(np.isfinite(ts)):
        raise ValueError("time series contains non-finite values")
    stds = ts.std(axis=0)
    flat = np.flatnonzero(stds <= 0.0)
    if flat.size:
        raise ZeroVarianceColumn(int(flat[0]))
    corr = np.corrcoef(ts, rowvar=False)
    corr = np.clip(corr, -1.0 + FISHER_CLAMP, 1.0 - FISHER_CLAMP)
    weights = np.arctanh(corr)
    np.maximum(weights, 0.0, out=weights)
    np.fill_diagonal(weights, 0.0)
    return ViewGraph.from_weights(weights, label=label)


def degree(g: ViewGraph) -> np.ndarray:
    """Vertex degrees: row sums of the affinity matrix."""
    return g.weights.sum(axis=1)


def laplacian(g: ViewGraph, kind: str = COMBINATORIAL) -> Laplacian:
    """Build the combinatorial (D - W) or symmetric-normalized Laplacian.

    Raises:
        IsolatedVertex: a zero-degree vertex blocks normalization.
    """
    if kind not in _LAPLACIAN_KINDS:
        raise ValueError(f"unknown laplacian kind {kind!r}; expected one of {_LAPLACIAN_KINDS}")
    d = degree(g)
    if kind == COMBINATORIAL:
        mat = np.diag(d) - g.weights
    else:
        zero = np.flatnonzero(d <= 0.0)
        if zero.size:
            raise IsolatedVertex(int(zero[0]))
        inv_sqrt = 1.0 / np.sqrt(d)
        mat = -g.weights * inv_sqrt[:, None] * inv_sqrt[None, :]
        np.fill_diagonal(mat, mat.diagonal() + 1.0)
        mat = 0.5 * (mat + mat.T)
    mat.setflags(write=False)
    return Laplacian(matrix=mat, kind=kind)


def cut_cost(g: ViewGraph, p: Partition, cluster: int) -> float:
    """Total weight of edges leaving one cluster.

    Raises:
        InvalidCluster: cluster id outside 1..k.
    """
    if not 1 <= cluster <= p.k:
        raise InvalidCluster(f"cluster {cluster} outside 1..{p.k}")
    if p.n != g.n:
        raise DimensionError(f"partition over {p.n} vertices, graph has {g.n}")
    inside = (p.assignment == cluster).astype(np.float64)
    return float(inside @ g.weights @ (1.0 - inside))


def volume(g: ViewGraph, p: Partition, cluster: int) -> float:
    """Sum of vertex degrees inside one cluster."""
    if not 1 <= cluster <= p.k:
        raise InvalidCluster(f"cluster {cluster} outside 1..{p.k}")
    d = degree(g)
    return float(d[p.assignment == cluster].sum())


def ncut_cost(g: ViewGraph, p: Partition) -> float:
    """Normalized cut: sum over clusters of cut weight over cluster volume.

    Raises:
        ZeroVolumeCluster: some cluster has zero total degree.
    """
    if p.n != g.n:
        raise DimensionError(f"partition over {p.n} vertices, graph has {g.n}")
    d = degree(g)
    total = 0.0
    for cluster in range(1, p.k + 1):
        inside = (p.assignment == cluster).astype(np.float64)
        vol = float(d @ inside)
        if vol <= 0.0:
            raise ZeroVolumeCluster(cluster)
        cut = float(inside @ g.weights @ (1.0 - inside))
        total += cut / vol
    return total
