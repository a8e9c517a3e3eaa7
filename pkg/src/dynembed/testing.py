"""Paired displacement permutation tests with exact Monte Carlo p-values.

The statistic is the Euclidean norm of the difference between the columnwise
sums of two embedding row sets. The temporal test windows a node set around a
proposed changepoint and permutes each node's window positions independently;
the spatial test compares two node sets at fixed time points and permutes the
pooled rows preserving set sizes. p = #{T*_i >= t_obs} / (n_sim + 1) with the
observed statistic included, so p >= 1/(n_sim+1) and ties count as extreme.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import DynamicEmbedding

__all__ = [
    "TemporalTestSpec",
    "SpatialTestSpec",
    "TestResult",
    "displacement_statistic",
    "temporal_test",
    "spatial_test",
]

# cap on floats materialized per permutation batch
_BATCH_BUDGET = 40_000_000


def _as_index_array(nodes) -> np.ndarray:
    idx = np.asarray(nodes, dtype=np.int64).ravel()
    if idx.size == 0:
        raise ValueError("node set must be non-empty")
    if np.unique(idx).size != idx.size:
        raise ValueError("node set contains duplicate indices")
    return idx


@dataclass(frozen=True)
class TemporalTestSpec:
    """Window of r1 time points before and r2 from the changepoint t_c."""

    nodes: np.ndarray
    t_c: int
    r1: int
    r2: int
    n_sim: int = 1000

    def __init__(self, nodes, t_c: int, r1: int, r2: int, n_sim: int = 1000):
        if r1 < 1 or r2 < 1:
            raise ValueError("window lengths r1, r2 must be >= 1")
        if t_c - r1 < 0:
            raise ValueError(f"window under-runs time zero: t_c={t_c}, r1={r1}")
        if n_sim < 1:
            raise ValueError("n_sim must be >= 1")
        object.__setattr__(self, "nodes", _as_index_array(nodes))
        object.__setattr__(self, "t_c", int(t_c))
        object.__setattr__(self, "r1", int(r1))
        object.__setattr__(self, "r2", int(r2))
        object.__setattr__(self, "n_sim", int(n_sim))


@dataclass(frozen=True)
class SpatialTestSpec:
    """Two disjoint node sets compared at one or more time points.

    ``times`` is usually a single time index; node-level testing pools each
    node's rows over a window of time points instead.
    """

    set1: np.ndarray
    set2: np.ndarray
    times: tuple[int, ...] = field(default=(0,))
    n_sim: int = 1000

    def __init__(self, set1, set2, times: Sequence[int] | int = (0,), n_sim: int = 1000):
        s1 = _as_index_array(set1)
        s2 = _as_index_array(set2)
        if np.intersect1d(s1, s2).size:
            raise ValueError("node sets must be disjoint")
        if np.isscalar(times):
            times = (int(times),)
        times = tuple(int(t) for t in times)
        if not times:
            raise ValueError("need at least one time point")
        if n_sim < 1:
            raise ValueError("n_sim must be >= 1")
        object.__setattr__(self, "set1", s1)
        object.__setattr__(self, "set2", s2)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "n_sim", int(n_sim))


@dataclass(frozen=True)
class TestResult:
    """Observed statistic, the permuted statistics (first entry observed), p."""

    t_obs: float
    permuted_stats: np.ndarray
    p_hat: float


def displacement_statistic(S1: np.ndarray, S2: np.ndarray) -> float:
    """Euclidean norm of (columnwise sum of S1) - (columnwise sum of S2)."""
    S1 = np.asarray(S1, dtype=np.float64)
    S2 = np.asarray(S2, dtype=np.float64)
    if S1.ndim != 2 or S2.ndim != 2 or S1.shape[1] != S2.shape[1]:
        raise ValueError(
            f"row sets need matching column counts, got {S1.shape} and {S2.shape}"
        )
    return float(np.linalg.norm(S1.sum(axis=0) - S2.sum(axis=0)))


def _finish(stats_first_obs: np.ndarray) -> TestResult:
    t_obs = float(stats_first_obs[0])
    p_hat = float(np.count_nonzero(stats_first_obs >= t_obs)) / stats_first_obs.size
    return TestResult(t_obs=t_obs, permuted_stats=stats_first_obs, p_hat=p_hat)


def _subset_sum_stats(window: np.ndarray, r1: int, n_sim: int, rng) -> np.ndarray:
    """Statistics for per-unit permutations of a (units, w, d) window.

    Permuting a unit's w positions and summing the first r1 equals summing a
    uniformly random r1-subset; with total := sum over everything fixed, the
    statistic is ||2 * subset_sum - total||. The observed statistic (identity
    permutation) is evaluated through the same expression so exact ties
    (e.g. constant embeddings) compare equal.
    """
    units, w, d = window.shape
    total = window.sum(axis=(0, 1))
    obs = np.linalg.norm(2.0 * window[:, :r1].sum(axis=(0, 1)) - total)
    stats = np.empty(1 + n_sim)
    stats[0] = obs
    batch = max(1, min(n_sim, _BATCH_BUDGET // max(1, units * w * d)))
    done = 0
    while done < n_sim:
        take = min(batch, n_sim - done)
        # first r1 ranks of per-unit uniform draws = random r1-subset per unit
        picks = np.argsort(rng.random((take, units, w)), axis=2)[:, :, :r1]
        chosen = np.take_along_axis(
            np.broadcast_to(window, (take, units, w, d)),
            picks[..., None],
            axis=2,
        )
        stats[1 + done : 1 + done + take] = np.linalg.norm(
            2.0 * chosen.sum(axis=(1, 2)) - total, axis=1
        )
        done += take
    return stats


def temporal_test(
    embedding: DynamicEmbedding, spec: TemporalTestSpec, seed: int = 0
) -> TestResult:
    """Paired displacement test of a change at t_c for the given node set.

    Each permutation independently shuffles, per node, that node's r1+r2
    window positions; the statistic compares the window halves.
    """
    if spec.t_c + spec.r2 > embedding.T:
        raise ValueError(
            f"window over-runs the series: t_c={spec.t_c}, r2={spec.r2}, T={embedding.T}"
        )
    if spec.nodes.min() < 0 or spec.nodes.max() >= embedding.n:
        raise ValueError("node index out of range")
    w = spec.r1 + spec.r2
    window = np.stack(
        [
            embedding.time_point(t)[spec.nodes]
            for t in range(spec.t_c - spec.r1, spec.t_c + spec.r2)
        ],
        axis=1,
    )  # (|nodes|, w, d)
    rng = np.random.default_rng(seed)
    stats = _subset_sum_stats(window, spec.r1, spec.n_sim, rng)
    return _finish(stats)


def spatial_test(
    embedding: DynamicEmbedding, spec: SpatialTestSpec, seed: int = 0
) -> TestResult:
    """Paired displacement test between two node sets at fixed time points.

    Permutations reassign the pooled rows to the two sets uniformly at
    random, preserving set sizes.
    """
    for t in spec.times:
        if not 0 <= t < embedding.T:
            raise ValueError(f"time index {t} out of range [0, {embedding.T})")
    for s in (spec.set1, spec.set2):
        if s.min() < 0 or s.max() >= embedding.n:
            raise ValueError("node index out of range")
    rows1 = np.vstack([embedding.time_point(t)[spec.set1] for t in spec.times])
    rows2 = np.vstack([embedding.time_point(t)[spec.set2] for t in spec.times])
    pooled = np.vstack([rows1, rows2])[None, :, :]  # one unit holding all rows
    a = rows1.shape[0]
    rng = np.random.default_rng(seed)
    # selecting a random size-a subset of the pooled rows == size-preserving
    # relabeling of the two sets
    stats = _subset_sum_stats(pooled, a, spec.n_sim, rng)
    return _finish(stats)
