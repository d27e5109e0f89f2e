"""Experiment drivers: eigengap inspection, consistency, timing, pipelines.

Randomness is controlled by one master seed.  Every consistency trial derives
its own generator from ``SeedSequence([master, group_size, trial])``, so any
single trial can be reproduced in isolation and results do not depend on
scheduling order.
"""

from __future__ import annotations

import contextlib
import time
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor

import numpy as np

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # pragma: no cover - optional at runtime
    threadpool_limits = None

from .clustering import consensus_labelling, dice
from .eigen import generalized_eig, zero_multiplicity
from .errors import DimensionError, DisconnectedGraph, InsufficientViews, InvalidSpec
from .io import RunReport, report_version
from .jdl import jdl_embed, joint_diagonalize
from .multiview import (
    MultiViewSet,
    aasc_weights,
    aggregate,
    embed,
    mvsc_weights,
    mvscw_weights,
)

METHODS = ("mvsc", "mvscw", "aasc", "jdl")

DEFAULT_GROUP_SIZES = (4, 8, 16, 32, 64, 128)


@dataclass
class ExperimentConfig:
    """Settings shared by the experiment drivers."""

    method: str = "mvsc"
    k: int = 5
    group_sizes: tuple = DEFAULT_GROUP_SIZES
    trials: int = 100
    num_seeds: int = 100
    rng_seed: int = 0
    workers: int = 1
    row_normalize: bool = False

    def validate(self, available_views: int) -> None:
        if self.method not in METHODS:
            raise InvalidSpec(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.trials < 1:
            raise InvalidSpec(f"need at least one trial, got {self.trials}")
        if self.k < 2:
            raise InvalidSpec(f"need k >= 2, got {self.k}")
        if not self.group_sizes:
            raise InvalidSpec("need at least one group size")
        biggest = 2 * max(self.group_sizes)
        if biggest > available_views:
            raise InsufficientViews(
                f"group size {max(self.group_sizes)} needs {biggest} disjoint views, "
                f"only {available_views} available"
            )


def compute_embedding(set_: MultiViewSet, method: str, k: int):
    """Group-wise embedding for one method.

    Returns:
        (Embedding, weight list or None for the joint-diagonalization method)
    """
    if method == "mvsc":
        w = mvsc_weights(set_.m)
        return embed(set_, w, k, method="mvsc"), w.alpha
    if method == "mvscw":
        w = mvscw_weights(set_, k)
        return embed(set_, w, k, method="mvscw"), w.alpha
    if method == "aasc":
        w, emb, _ = aasc_weights(set_, k)
        return emb, w.alpha
    if method == "jdl":
        jd = joint_diagonalize(set_)
        return jdl_embed(jd, set_, k), None
    raise InvalidSpec(f"unknown method {method!r}; expected one of {METHODS}")


@dataclass
class EigengapReport:
    """Smallest nontrivial spectral values with consecutive gap ratios."""

    method: str
    values: list
    gap_ratios: list
    suggested_k: int


def eigengap_report(set_: MultiViewSet, method: str, k_max: int,
                    weight_k: int | None = None) -> EigengapReport:
    """Report the smallest ``k_max`` nontrivial values and their gap ratios.

    For the aggregation methods these are generalized eigenvalues of the
    weighted aggregate (quality weights need a target cluster count, supplied
    via ``weight_k`` and defaulting to ``k_max + 1``); the joint
    diagonalization method reports sorted mean-diagonal column scores.
    ``suggested_k`` marks the largest consecutive ratio.
    """
    if not 1 <= k_max <= set_.n - 1:
        raise DimensionError(f"k_max must be in 1..{set_.n - 1}, got {k_max}")
    if method == "jdl":
        jd = joint_diagonalize(set_)
        scores = np.sort(jd.mean_diagonal)
        values = scores[1:1 + k_max]
    else:
        if method == "mvsc":
            w = mvsc_weights(set_.m)
        elif method == "mvscw":
            w = mvscw_weights(set_, weight_k if weight_k is not None else k_max + 1)
        elif method == "aasc":
            w = aasc_weights(set_, weight_k if weight_k is not None else k_max + 1)[0]
        else:
            raise InvalidSpec(f"unknown method {method!r}; expected one of {METHODS}")
        agg = aggregate(set_, w)
        sol = generalized_eig(agg.laplacian, agg.degrees)
        zeros = zero_multiplicity(sol.values)
        if zeros != 1:
            raise DisconnectedGraph(zeros)
        values = sol.values[1:1 + k_max]
    ratios = [float(values[i + 1] / values[i]) for i in range(len(values) - 1)]
    suggested = (int(np.argmax(ratios)) + 2) if ratios else 2
    return EigengapReport(
        method=method,
        values=[float(v) for v in values],
        gap_ratios=ratios,
        suggested_k=suggested,
    )


def _disjoint_pair(rng: np.random.Generator, m: int, gamma: int):
    order = rng.permutation(m)
    return order[:gamma].tolist(), order[gamma:2 * gamma].tolist()


def _trial_dice(set_: MultiViewSet, cfg: ExperimentConfig, gamma: int, trial: int,
                subset_sampler) -> float:
    seq = np.random.SeedSequence([cfg.rng_seed, gamma, trial])
    sample_seed, seed_a, seed_b = seq.spawn(3)
    rng = np.random.default_rng(sample_seed)
    idx_a, idx_b = subset_sampler(rng, set_.m, gamma)
    labellings = []
    for indices, child in ((idx_a, seed_a), (idx_b, seed_b)):
        subset = set_.subset(indices)
        emb, _ = compute_embedding(subset, cfg.method, cfg.k)
        base = int(child.generate_state(1)[0] % (2 ** 31))
        labellings.append(
            consensus_labelling(emb, cfg.k, num_seeds=cfg.num_seeds, base_seed=base,
                                row_normalize=cfg.row_normalize)
        )
    return dice(labellings[0], labellings[1])


@dataclass
class ConsistencyResult:
    """Per-group-size Dice samples between disjoint view subsets."""

    method: str
    k: int
    trials: int
    group_sizes: list
    dice_values: dict
    summary: dict
    rng_seed: int


def consistency_experiment(set_: MultiViewSet, cfg: ExperimentConfig,
                           subset_sampler=None) -> ConsistencyResult:
    """Dice agreement between labellings from disjoint same-size subsets.

    For every group size and trial, two non-overlapping subsets are drawn,
    each is embedded and consensus-labelled, and the matched Dice coefficient
    is recorded.  Trials may run on multiple workers; sub-seeding is keyed by
    (group size, trial index) so the output is schedule-independent.
    """
    cfg.validate(set_.m)
    sampler = subset_sampler or _disjoint_pair
    cells = [(gamma, t) for gamma in cfg.group_sizes for t in range(cfg.trials)]
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(
                lambda cell: _trial_dice(set_, cfg, cell[0], cell[1], sampler), cells))
    else:
        results = [_trial_dice(set_, cfg, gamma, t, sampler) for gamma, t in cells]
    values: dict = {gamma: [] for gamma in cfg.group_sizes}
    for (gamma, _), value in zip(cells, results):
        values[gamma].append(float(value))
    summary = {}
    for gamma, samples in values.items():
        lo, q1, med, q3, hi = np.percentile(samples, [0, 25, 50, 75, 100])
        summary[gamma] = {"min": float(lo), "q1": float(q1), "median": float(med),
                          "q3": float(q3), "max": float(hi)}
    return ConsistencyResult(
        method=cfg.method,
        k=cfg.k,
        trials=cfg.trials,
        group_sizes=list(cfg.group_sizes),
        dice_values=values,
        summary=summary,
        rng_seed=cfg.rng_seed,
    )


@dataclass
class TimingResult:
    """Mean and standard deviation of embedding wall-clock seconds."""

    k: int
    trials: int
    group_sizes: list
    methods: list
    seconds: dict


def timing_experiment(set_: MultiViewSet, methods, k: int, group_sizes,
                      trials: int = 3) -> TimingResult:
    """Wall-clock embedding time per method and group size.

    The clock covers only the embedding computation (including any weight
    optimization the method requires); the adjacency matrices are prepared
    before it starts.  Each cell runs one untimed warm-up followed by
    ``trials`` timed repetitions on the first ``m`` views.  Cells run
    strictly sequentially, with BLAS pools pinned to one thread for the
    duration so dispatch thresholds do not distort the size scaling.
    """
    group_sizes = list(group_sizes)
    if max(group_sizes) > set_.m:
        raise InsufficientViews(
            f"group size {max(group_sizes)} exceeds available views ({set_.m})"
        )
    for method in methods:
        if method not in METHODS:
            raise InvalidSpec(f"unknown method {method!r}; expected one of {METHODS}")
    pinned = threadpool_limits(limits=1) if threadpool_limits else contextlib.nullcontext()
    seconds: dict = {method: {} for method in methods}
    with pinned:
        for method in methods:
            for m in group_sizes:
                chosen = set_.views[:m]
                samples = []
                for run in range(trials + 1):
                    fresh = MultiViewSet(chosen)
                    fresh.stack  # materialize inputs outside the clock
                    fresh.degrees
                    start = time.perf_counter()
                    compute_embedding(fresh, method, k)
                    elapsed = time.perf_counter() - start
                    if run > 0:
                        samples.append(elapsed)
                seconds[method][m] = {
                    "mean": float(np.mean(samples)),
                    "std": float(np.std(samples)),
                    "samples": [float(s) for s in samples],
                }
    return TimingResult(k=k, trials=trials, group_sizes=group_sizes,
                        methods=list(methods), seconds=seconds)


def run_pipeline(set_: MultiViewSet, cfg: ExperimentConfig) -> RunReport:
    """Embed, consensus-label and package one end-to-end run."""
    if cfg.method not in METHODS:
        raise InvalidSpec(f"unknown method {cfg.method!r}; expected one of {METHODS}")
    start = time.perf_counter()
    emb, weights = compute_embedding(set_, cfg.method, cfg.k)
    embedding_seconds = time.perf_counter() - start
    labelling = consensus_labelling(
        emb, cfg.k, num_seeds=cfg.num_seeds, base_seed=cfg.rng_seed,
        row_normalize=cfg.row_normalize,
    )
    return RunReport(
        method=cfg.method,
        k=cfg.k,
        assignment=labelling.assignment.tolist(),
        mode_support=[float(s) for s in labelling.mode_support],
        seeds_used=labelling.seeds_used,
        empty_clusters=list(labelling.empty_clusters),
        aligned_to_first=labelling.aligned_to_first,
        weights=None if weights is None else [float(w) for w in weights],
        eigenvalues=[float(v) for v in emb.eigenvalues],
        embedding_seconds=float(embedding_seconds),
        version=report_version(),
        config={
            "method": cfg.method,
            "k": cfg.k,
            "num_seeds": cfg.num_seeds,
            "rng_seed": cfg.rng_seed,
            "row_normalize": cfg.row_normalize,
        },
    )
