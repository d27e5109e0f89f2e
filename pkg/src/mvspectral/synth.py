"""Synthetic planted-partition view generators.

Each view draws edge weights from block-dependent normal distributions
(within-block vs between-block), clips at zero and symmetrizes, giving a
family of noisy graphs over one known ground-truth community structure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec
from .graphs import Partition, ViewGraph
from .multiview import MultiViewSet


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of a planted-partition view family."""

    n: int
    k_true: int
    m: int
    intra_mean: float = 1.0
    intra_sd: float = 0.2
    inter_mean: float = 0.2
    inter_sd: float = 0.2
    block_sizes: tuple = ()
    rng_seed: int = 0

    def resolved_blocks(self) -> tuple:
        """Block sizes; defaults to a near-balanced split of n."""
        if self.block_sizes:
            return tuple(int(b) for b in self.block_sizes)
        base, extra = divmod(self.n, self.k_true)
        return tuple(base + (1 if i < extra else 0) for i in range(self.k_true))

    def validate(self) -> None:
        if self.n < 2 or self.k_true < 1 or self.m < 1:
            raise InvalidSpec(f"bad sizes n={self.n} k={self.k_true} m={self.m}")
        if not self.intra_mean > self.inter_mean >= 0.0:
            raise InvalidSpec(
                f"need intra mean > inter mean >= 0, got {self.intra_mean} vs {self.inter_mean}"
            )
        if self.intra_sd < 0.0 or self.inter_sd < 0.0:
            raise InvalidSpec("standard deviations must be nonnegative")
        blocks = self.resolved_blocks()
        if len(blocks) != self.k_true or sum(blocks) != self.n or min(blocks) < 1:
            raise InvalidSpec(f"block sizes {blocks} do not partition {self.n} vertices")


def synth_views(spec: SyntheticSpec):
    """Generate a planted multi-view set and its ground-truth partition.

    Upper-triangle weights are drawn once per undirected pair from the
    within- or between-block distribution, clipped at zero, then mirrored.

    Returns:
        (MultiViewSet, Partition)
    """
    spec.validate()
    blocks = spec.resolved_blocks()
    labels = np.repeat(np.arange(1, spec.k_true + 1), blocks)
    same_block = labels[:, None] == labels[None, :]
    means = np.where(same_block, spec.intra_mean, spec.inter_mean)
    sds = np.where(same_block, spec.intra_sd, spec.inter_sd)
    upper = np.triu_indices(spec.n, k=1)
    rng = np.random.default_rng(spec.rng_seed)
    views = []
    for i in range(spec.m):
        w = np.zeros((spec.n, spec.n))
        w[upper] = np.maximum(0.0, rng.normal(means[upper], sds[upper]))
        w = w + w.T
        views.append(ViewGraph.from_weights(w, label=f"synthetic-{i:03d}"))
    return MultiViewSet(views), Partition(assignment=labels, k=spec.k_true)
