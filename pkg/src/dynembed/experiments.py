"""Replicated p-value studies, dimension sweeps and temporal clustering.

run_experiment repeats sample -> embed -> test over seeded replicates and
summarizes the p-value distribution: a Kolmogorov-Smirnov uniformity verdict
(uniform / super-uniform / sub-uniform) and the power, read as the empirical
CDF at the 5% level. temporal_dissimilarity and kmeans_time_clusters support
the time-clustering analysis of long embeddings.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.stats import kstest
from sklearn.cluster import KMeans

from .generators import (
    ChungLuSpec,
    DsbmSpec,
    SystemPreset,
    build_preset,
    noise_free_rank,
    sample_network,
)
from .graph import DynamicEmbedding
from .methods import METHOD_NAMES, embed_network
from .skipgram import SkipGramConfig
from .testing import SpatialTestSpec, TemporalTestSpec, spatial_test, temporal_test

__all__ = [
    "ExperimentSpec",
    "ExperimentReport",
    "DissimilarityMatrix",
    "run_experiment",
    "dimension_sweep",
    "temporal_dissimilarity",
    "kmeans_time_clusters",
]

KS_ALPHA = 0.05
POWER_LEVEL = 0.05


@dataclass(frozen=True)
class ExperimentSpec:
    """One replicated testing experiment.

    ``d=None`` selects the rank of the preset's noise-free embedding matrix.
    ``level`` is graph, community or node granularity; ``community`` picks the
    community tested temporally (0 is the static community of the moving
    systems), ``node`` the node tested at node level. Spatial tests compare
    the two communities (or one node from each) at the last time point, or
    over the post-change window at node level.
    """

    preset: SystemPreset
    method: str
    level: str = "graph"
    test_kind: str = "temporal"
    d: int | None = None
    gamma: float | None = None
    skipgram: SkipGramConfig = field(default_factory=SkipGramConfig)
    community: int = 0
    node: int = 0
    replicates: int = 200
    n_sim: int = 1000
    master_seed: int = 0

    def __post_init__(self):
        if self.method not in METHOD_NAMES:
            raise ValueError(f"unknown method {self.method!r}")
        if self.level not in ("graph", "community", "node"):
            raise ValueError(f"unknown level {self.level!r}")
        if self.test_kind not in ("temporal", "spatial"):
            raise ValueError(f"unknown test kind {self.test_kind!r}")
        if self.test_kind == "spatial" and self.level == "graph":
            raise ValueError("spatial testing compares two node sets; "
                             "use community or node level")
        if self.level == "community" and self.preset.name in (
            "static-power",
            "moving-power",
        ):
            raise ValueError("community level needs a block-model preset")
        if self.replicates < 1 or self.n_sim < 1:
            raise ValueError("replicates and n_sim must be >= 1")

    @property
    def dimension(self) -> int:
        return self.d if self.d is not None else noise_free_rank(self.preset)


@dataclass(frozen=True)
class ExperimentReport:
    """Sorted p-values with the uniformity verdict and the power at 5%."""

    p_values: np.ndarray
    ks_statistic: float
    ks_pvalue: float
    ks_decision: str
    power_at_5pct: float
    wall_time: float
    metadata: dict

    def to_dict(self) -> dict:
        return {
            "metadata": dict(self.metadata),
            "ks_statistic": self.ks_statistic,
            "ks_pvalue": self.ks_pvalue,
            "ks_decision": self.ks_decision,
            "power_at_5pct": self.power_at_5pct,
            "wall_time": self.wall_time,
            "p_values": [float(p) for p in self.p_values],
        }


@dataclass(frozen=True)
class DissimilarityMatrix:
    """Symmetric T x T displacement distances between embedding time points."""

    R: np.ndarray

    def __post_init__(self):
        R = self.R
        if R.ndim != 2 or R.shape[0] != R.shape[1]:
            raise ValueError("R must be square")
        if not np.array_equal(R, R.T) or np.any(np.diag(R) != 0) or R.min() < 0:
            raise ValueError("R must be symmetric, non-negative, zero-diagonal")

    @property
    def T(self) -> int:
        return self.R.shape[0]


def _communities(system_spec) -> np.ndarray | None:
    if isinstance(system_spec, DsbmSpec):
        return system_spec.tau
    return None


def _build_test(spec: ExperimentSpec, system_spec, T: int):
    """Resolve the level into a concrete temporal or spatial test spec."""
    tau = _communities(system_spec)
    n = system_spec.n
    if spec.test_kind == "temporal":
        if spec.level == "graph":
            nodes = np.arange(n)
        elif spec.level == "community":
            if tau is None:
                raise ValueError("community level needs a block-model preset")
            nodes = np.flatnonzero(tau == spec.community)
        else:
            nodes = np.array([spec.node])
        t_c = T // 2
        return TemporalTestSpec(
            nodes=nodes, t_c=t_c, r1=t_c, r2=T - t_c, n_sim=spec.n_sim
        )
    if spec.level == "community":
        if tau is None:
            raise ValueError("community level needs a block-model preset")
        set1, set2 = np.flatnonzero(tau == 0), np.flatnonzero(tau == 1)
        times: tuple[int, ...] = (T - 1,)
    else:
        if tau is not None:
            set1 = np.flatnonzero(tau == 0)[:1]
            set2 = np.flatnonzero(tau == 1)[:1]
        else:
            set1, set2 = np.array([0]), np.array([n - 1])
        times = tuple(range(T // 2, T)) if T > 2 else (T - 1,)
    return SpatialTestSpec(set1=set1, set2=set2, times=times, n_sim=spec.n_sim)


def _replicate_pvalue(spec: ExperimentSpec, seed_state: tuple[int, int, int]) -> float:
    net_seed, embed_seed, test_seed = seed_state
    preset = replace(spec.preset, seed=net_seed)
    system_spec = build_preset(preset)
    network = sample_network(system_spec, net_seed)
    embedding = embed_network(
        spec.method,
        network,
        spec.dimension,
        seed=embed_seed,
        gamma=spec.gamma,
        skipgram=spec.skipgram,
    )
    test = _build_test(spec, system_spec, network.T)
    if isinstance(test, TemporalTestSpec):
        result = temporal_test(embedding, test, seed=test_seed)
    else:
        result = spatial_test(embedding, test, seed=test_seed)
    return result.p_hat


def _replicate_seeds(master_seed: int, replicates: int) -> list[tuple[int, int, int]]:
    children = np.random.SeedSequence(master_seed).spawn(replicates)
    return [tuple(int(s) for s in child.generate_state(3)) for child in children]


def classify_pvalues(p_values: np.ndarray) -> tuple[float, float, str]:
    """KS distance/p-value against Uniform(0,1) and the three-way verdict."""
    ks = kstest(p_values, "uniform")
    if ks.pvalue >= KS_ALPHA:
        decision = "uniform"
    elif np.mean(p_values <= POWER_LEVEL) > POWER_LEVEL:
        decision = "super-uniform"
    else:
        decision = "sub-uniform"
    return float(ks.statistic), float(ks.pvalue), decision


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> ExperimentReport:
    """Sample, embed and test ``spec.replicates`` times; summarize the p-values.

    Replicates are independent with seeds derived from the master seed, so
    the report is identical for any worker count.
    """
    start = time.perf_counter()
    seeds = _replicate_seeds(spec.master_seed, spec.replicates)
    if workers > 1 and spec.replicates > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_replicate_pvalue, spec, s) for s in seeds]
            p_values = []
            for idx, fut in enumerate(futures):
                try:
                    p_values.append(fut.result())
                except Exception as exc:
                    raise RuntimeError(f"replicate {idx} failed: {exc}") from exc
    else:
        p_values = []
        for idx, s in enumerate(seeds):
            try:
                p_values.append(_replicate_pvalue(spec, s))
            except Exception as exc:
                raise RuntimeError(f"replicate {idx} failed: {exc}") from exc
    p_values = np.sort(np.asarray(p_values))
    ks_stat, ks_p, decision = classify_pvalues(p_values)
    return ExperimentReport(
        p_values=p_values,
        ks_statistic=ks_stat,
        ks_pvalue=ks_p,
        ks_decision=decision,
        power_at_5pct=float(np.mean(p_values <= POWER_LEVEL)),
        wall_time=time.perf_counter() - start,
        metadata={
            "preset": spec.preset.name,
            "n": spec.preset.n,
            "T": spec.preset.T,
            "method": spec.method,
            "d": spec.dimension,
            "level": spec.level,
            "test": spec.test_kind,
            "replicates": spec.replicates,
            "n_sim": spec.n_sim,
            "master_seed": spec.master_seed,
        },
    )


def dimension_sweep(
    spec: ExperimentSpec, dims: Sequence[int], workers: int = 1
) -> list[ExperimentReport]:
    """Run the experiment once per embedding dimension."""
    if not dims:
        raise ValueError("dims must be non-empty")
    return [run_experiment(replace(spec, d=int(d)), workers=workers) for d in dims]


def temporal_dissimilarity(
    embedding: DynamicEmbedding, node_set=None
) -> DissimilarityMatrix:
    """Pairwise displacement statistics between all embedding time points.

    R[i, j] is the paired displacement statistic between time slices i and j
    restricted to ``node_set`` (all nodes when omitted).
    """
    if node_set is None:
        node_set = np.arange(embedding.n)
    node_set = np.asarray(node_set, dtype=np.int64)
    if node_set.size == 0:
        raise ValueError("node set must be non-empty")
    colsums = np.stack(
        [embedding.time_point(t)[node_set].sum(axis=0) for t in range(embedding.T)]
    )
    T = embedding.T
    R = np.zeros((T, T))
    for i in range(T):
        for j in range(i + 1, T):
            R[i, j] = R[j, i] = np.linalg.norm(colsums[i] - colsums[j])
    return DissimilarityMatrix(R=R)


def kmeans_time_clusters(R: DissimilarityMatrix, K: int, seed: int = 0) -> np.ndarray:
    """k-means over the rows of R: a cluster label per time point.

    k-means++ initialization, 100 restarts, best inertia kept; deterministic
    under the seed.
    """
    if not 1 <= K <= R.T:
        raise ValueError(f"cluster count K={K} out of range [1, {R.T}]")
    random_state = int(np.random.SeedSequence(seed).generate_state(1)[0] % (2**32 - 1))
    km = KMeans(n_clusters=K, init="k-means++", n_init=100, random_state=random_state)
    return km.fit_predict(R.R)
