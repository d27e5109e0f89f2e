"""Discretization of embeddings and label-space comparisons.

Embedding rows are clustered with seeded k-means++ / Lloyd iterations.  A
consensus labelling runs many seeds, aligns every run to the first by the
overlap-maximizing cluster permutation, and takes the per-vertex mode.  All
comparisons between labellings go through that same permutation matching, so
the reported Dice agreement is invariant to label renumbering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .eigen import Embedding
from .errors import ShapeMismatch, TooFewPoints

KMEANS_MAX_ITER = 300


@dataclass(frozen=True, eq=False)
class Labelling:
    """Per-vertex cluster assignment (ids 1..k) with consensus metadata.

    ``mode_support`` is the fraction of aligned runs that voted for each
    vertex's winning label; ``empty_clusters`` lists ids that won no vertex
    (reported, never repaired); ``aligned_to_first`` records that runs were
    permutation-matched to the first seed before voting.
    """

    assignment: np.ndarray
    k: int
    seeds_used: int = 1
    mode_support: np.ndarray | None = None
    empty_clusters: tuple = ()
    aligned_to_first: bool = True

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64)
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)
        if a.min(initial=1) < 1 or a.max(initial=self.k) > self.k:
            raise ShapeMismatch(f"labels must lie in 1..{self.k}")

    @property
    def n(self) -> int:
        return self.assignment.shape[0]


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """counts[i][j] = number of vertices labelled i+1 in A and j+1 in B."""

    counts: np.ndarray


def _labels_of(x) -> np.ndarray:
    if hasattr(x, "assignment"):
        return np.asarray(x.assignment, dtype=np.int64)
    return np.asarray(x, dtype=np.int64)


def _k_of(x, labels: np.ndarray) -> int:
    if hasattr(x, "k"):
        return int(x.k)
    return int(labels.max(initial=1))


def _nearest(points: np.ndarray, centroids: np.ndarray):
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    assign = np.argmin(d2, axis=1)
    return assign, d2


def _kmeanspp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centroids = np.empty((k, points.shape[1]))
    centroids[0] = points[int(rng.integers(n))]
    closest = ((points - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = float(closest.sum())
        if total <= 0.0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=closest / total))
        centroids[j] = points[idx]
        np.minimum(closest, ((points - centroids[j]) ** 2).sum(axis=1), out=closest)
    return centroids


def kmeans(points, k: int, seed: int, max_iter: int = KMEANS_MAX_ITER,
           track: list | None = None):
    """Seeded k-means++ initialization followed by Lloyd iterations.

    Stops at an assignment fixpoint or after ``max_iter`` iterations; empty
    clusters are repaired by moving the point farthest from its current
    centroid.  Pass a list as ``track`` to collect the per-iteration
    objective (sum of squared distances), which is nonincreasing.

    Returns:
        (assignment with ids 1..k, final objective)

    Raises:
        TooFewPoints: fewer points than clusters.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise TooFewPoints(f"points must be 2-d, got shape {pts.shape}")
    n = pts.shape[0]
    if not 1 <= k <= n:
        raise TooFewPoints(f"need 1 <= k <= {n}, got {k}")
    rng = np.random.default_rng(seed)
    centroids = _kmeanspp_init(pts, k, rng)
    assign, d2 = _nearest(pts, centroids)
    objective = float(d2[np.arange(n), assign].sum())
    if track is not None:
        track.append(objective)
    for _ in range(max_iter):
        for j in range(k):
            members = assign == j
            if members.any():
                centroids[j] = pts[members].mean(axis=0)
            else:
                own = ((pts - centroids[assign]) ** 2).sum(axis=1)
                far = int(np.argmax(own))
                centroids[j] = pts[far]
                assign[far] = j
        new_assign, d2 = _nearest(pts, centroids)
        objective = float(d2[np.arange(n), new_assign].sum())
        if track is not None:
            track.append(objective)
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
    return assign + 1, objective


def contingency_table(a, b) -> ContingencyTable:
    """Cross-tabulate two labellings over the same vertices."""
    la, lb = _labels_of(a), _labels_of(b)
    if la.shape != lb.shape:
        raise ShapeMismatch(f"labellings have lengths {la.shape[0]} and {lb.shape[0]}")
    ka, kb = _k_of(a, la), _k_of(b, lb)
    if ka != kb:
        raise ShapeMismatch(f"labellings have k={ka} and k={kb}")
    counts = np.zeros((ka, ka), dtype=np.int64)
    np.add.at(counts, (la - 1, lb - 1), 1)
    return ContingencyTable(counts=counts)


def _max_agreement(counts: np.ndarray) -> int:
    rows, cols = linear_sum_assignment(-counts)
    return int(counts[rows, cols].sum())


def best_label_permutation(counts: np.ndarray):
    """Agreement-maximizing label permutation for a contingency table.

    Returns the lexicographically smallest permutation ``perm`` (1-based:
    ``perm[i-1]`` is the column matched to row i) among all maximizers,
    together with the total agreement.  Ties are resolved by fixing rows in
    order to the smallest column that still admits an optimal completion.
    """
    counts = np.asarray(counts, dtype=np.int64)
    k = counts.shape[0]
    if counts.shape != (k, k):
        raise ShapeMismatch(f"contingency table must be square, got {counts.shape}")
    best_total = _max_agreement(counts)
    perm = np.zeros(k, dtype=np.int64)
    remaining = list(range(k))
    fixed = 0
    for i in range(k):
        for j in sorted(remaining):
            rest_cols = [c for c in remaining if c != j]
            rest = _max_agreement(counts[np.ix_(range(i + 1, k), rest_cols)]) if rest_cols else 0
            if fixed + counts[i, j] + rest == best_total:
                perm[i] = j + 1
                remaining.remove(j)
                fixed += counts[i, j]
                break
    return perm, best_total


def match_permutation(a, b) -> np.ndarray:
    """Permutation of labels in ``a`` that maximizes overlap with ``b``.

    Raises:
        ShapeMismatch: different lengths or cluster counts.
    """
    perm, _ = best_label_permutation(contingency_table(a, b).counts)
    return perm


def dice(a, b) -> float:
    """Matched-label Dice agreement between two labellings in [0, 1].

    After the overlap-maximizing permutation, Dice is
    2 * sum_i |A_i & B_pi(i)| / sum_i (|A_i| + |B_pi(i)|); for two full
    partitions of the same vertices this equals the fraction of agreeing
    labels.
    """
    counts = contingency_table(a, b).counts
    perm, agreement = best_label_permutation(counts)
    sizes_a = counts.sum(axis=1)
    sizes_b = counts.sum(axis=0)
    denom = float(sizes_a.sum() + sizes_b[perm - 1].sum())
    return 2.0 * agreement / denom


def consensus_labelling(emb, k: int, num_seeds: int = 100, base_seed: int = 0,
                        row_normalize: bool = False) -> Labelling:
    """Mode labelling over many aligned k-means runs.

    k-means runs with seeds ``base_seed .. base_seed + num_seeds - 1``; each
    run is aligned to the first by permutation matching before the
    per-vertex vote.  Ties go to the lowest cluster id.  Cluster ids that
    win no vertex are reported in the metadata, not repaired.
    """
    if num_seeds < 1:
        raise TooFewPoints(f"need at least one seed, got {num_seeds}")
    points = emb.coords if isinstance(emb, Embedding) else np.asarray(emb, dtype=np.float64)
    if row_normalize:
        norms = np.linalg.norm(points, axis=1, keepdims=True)
        points = np.where(norms > 0, points / np.where(norms > 0, norms, 1.0), points)
    n = points.shape[0]
    votes = np.zeros((n, k), dtype=np.int64)
    reference = None
    for r in range(num_seeds):
        labels, _ = kmeans(points, k, seed=base_seed + r)
        if reference is None:
            reference = labels
            aligned = labels
        else:
            perm = best_label_permutation(contingency_table(labels, reference).counts)[0]
            aligned = perm[labels - 1]
        votes[np.arange(n), aligned - 1] += 1
    assignment = np.argmax(votes, axis=1) + 1
    support = votes[np.arange(n), assignment - 1] / num_seeds
    empty = tuple(sorted(set(range(1, k + 1)) - set(assignment.tolist())))
    return Labelling(
        assignment=assignment,
        k=k,
        seeds_used=num_seeds,
        mode_support=support,
        empty_clusters=empty,
        aligned_to_first=True,
    )


