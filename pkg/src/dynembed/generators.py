"""Seeded samplers for the simulated dynamic-network systems.

Two model families: dynamic stochastic block models (fixed communities,
time-varying edge-probability matrices) and Chung-Lu graphs (edge probability
proportional to the product of power-law node weights). Named presets build
the exact systems used in the stability experiments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
import scipy.sparse as sp

from .graph import DynamicNetwork

__all__ = [
    "DsbmSpec",
    "ChungLuSpec",
    "SystemPreset",
    "PRESET_NAMES",
    "sample_dsbm",
    "sample_chung_lu",
    "sample_network",
    "sample_gnm",
    "build_preset",
    "noise_free_rank",
]

PRESET_NAMES = (
    "static",
    "moving",
    "merge",
    "static-power",
    "moving-power",
    "k-community",
)

# Table-defined two-community systems. "moving" perturbs the second
# community's within-probability by +0.03 in the changed snapshots.
_B_STATIC = np.array([[0.5, 0.5], [0.5, 0.4]])
_B_MOVING_BEFORE = np.array([[0.5, 0.2], [0.2, 0.5]])
_B_MOVING_AFTER = np.array([[0.5, 0.2], [0.2, 0.53]])
_B_MERGE_BEFORE = np.array([[0.9, 0.2], [0.2, 0.1]])
_B_MERGE_AFTER = np.array([[0.5, 0.5], [0.5, 0.5]])


@dataclass(frozen=True)
class DsbmSpec:
    """Community assignment plus one K x K probability matrix per snapshot."""

    B: tuple[np.ndarray, ...]
    tau: np.ndarray

    def __init__(self, B: Sequence[np.ndarray], tau: np.ndarray):
        tau = np.asarray(tau, dtype=np.int64)
        if tau.ndim != 1 or tau.size < 1:
            raise ValueError("tau must be a non-empty 1-d assignment vector")
        if tau.min() < 0:
            raise ValueError("community indices must be non-negative")
        K = int(tau.max()) + 1
        mats = []
        for t, b in enumerate(B):
            b = np.asarray(b, dtype=np.float64)
            if b.shape[0] != b.shape[1] or b.shape[0] < K:
                raise ValueError(f"B[{t}] must be K x K with K >= {K}")
            if not np.allclose(b, b.T):
                raise ValueError(f"B[{t}] is not symmetric")
            if b.min() < 0 or b.max() > 1:
                raise ValueError(f"B[{t}] entries must lie in [0, 1]")
            mats.append(b.copy())
        if not mats:
            raise ValueError("need at least one probability matrix")
        object.__setattr__(self, "B", tuple(mats))
        object.__setattr__(self, "tau", tau)

    @property
    def n(self) -> int:
        return self.tau.size

    @property
    def T(self) -> int:
        return len(self.B)

    @property
    def K(self) -> int:
        return self.B[0].shape[0]


@dataclass(frozen=True)
class ChungLuSpec:
    """Positive node weights plus one density multiplier per snapshot."""

    weights: np.ndarray
    scales: tuple[float, ...]

    def __init__(self, weights: np.ndarray, scales: Sequence[float]):
        weights = np.asarray(weights, dtype=np.float64)
        if weights.ndim != 1 or weights.size < 1:
            raise ValueError("weights must be a non-empty 1-d vector")
        if weights.min() <= 0:
            raise ValueError("weights must be positive")
        scales = tuple(float(s) for s in scales)
        if not scales:
            raise ValueError("need at least one scale")
        if any(not 0 < s <= 1 for s in scales):
            raise ValueError("scales must lie in (0, 1]")
        pmax = weights.max() ** 2 / weights.sum()
        if max(scales) * pmax > 1 + 1e-12:
            raise ValueError(
                f"edge probability {max(scales) * pmax:.4f} exceeds 1; "
                "rescale the weights"
            )
        object.__setattr__(self, "weights", weights.copy())
        object.__setattr__(self, "scales", scales)

    @property
    def n(self) -> int:
        return self.weights.size

    @property
    def T(self) -> int:
        return len(self.scales)


@dataclass(frozen=True)
class SystemPreset:
    """A named simulated system at a chosen scale.

    ``change_at`` (snapshot index from which the planted change applies)
    defaults to T // 2, so T=2 changes the second snapshot and T=50 changes
    snapshots 25..49. Power presets draw their weights from a Pareto law
    with tail exponent ``power_exponent`` and minimum ``min_weight``, then
    rescale so no edge probability exceeds 1; the draw is controlled by
    ``seed``. ``p_within`` is the per-community within-probability vector of
    the k-community family (off-diagonals fixed at 0.2, the change adds 0.03
    to the second community's within-probability).
    """

    name: str
    n: int
    T: int = 2
    seed: int = 0
    p_within: tuple[float, ...] = field(default=(0.5,) * 8)
    power_exponent: float = 3.0
    min_weight: float = 4.0

    def __post_init__(self):
        if self.name not in PRESET_NAMES:
            raise ValueError(
                f"unknown preset {self.name!r}; expected one of {PRESET_NAMES}"
            )
        if self.n < 1 or self.T < 1:
            raise ValueError("n and T must be positive")
        if self.name in ("static", "moving", "merge") and self.n < 2:
            raise ValueError("two-community presets need n >= 2")
        if self.name == "k-community" and self.n < len(self.p_within):
            raise ValueError("k-community preset needs n >= K")

    @property
    def change_at(self) -> int:
        return self.T // 2


def _equal_split(n: int, K: int) -> np.ndarray:
    """Equal community sizes n // K, remainder assigned to the last community."""
    tau = np.repeat(np.arange(K), n // K)
    return np.concatenate([tau, np.full(n - tau.size, K - 1, dtype=tau.dtype)])


def _pareto_weights(n: int, exponent: float, minimum: float, rng) -> np.ndarray:
    """Pareto(tail exponent, minimum) draws rescaled so max_ij w_i w_j / sum_k w_k <= 1."""
    if exponent <= 1:
        raise ValueError("power-law exponent must exceed 1")
    w = minimum * (1.0 - rng.random(n)) ** (-1.0 / exponent)
    c = min(1.0, w.sum() / w.max() ** 2)
    return w * c


def build_preset(preset: SystemPreset) -> Union[DsbmSpec, ChungLuSpec]:
    """Materialize a named preset into a concrete sampling spec."""
    n, T, change = preset.n, preset.T, preset.change_at
    if preset.name == "static":
        return DsbmSpec([_B_STATIC] * T, _equal_split(n, 2))
    if preset.name == "moving":
        B = [_B_MOVING_BEFORE] * change + [_B_MOVING_AFTER] * (T - change)
        return DsbmSpec(B, _equal_split(n, 2))
    if preset.name == "merge":
        B = [_B_MERGE_BEFORE] * change + [_B_MERGE_AFTER] * (T - change)
        return DsbmSpec(B, _equal_split(n, 2))
    if preset.name in ("static-power", "moving-power"):
        rng = np.random.default_rng(preset.seed)
        w = _pareto_weights(n, preset.power_exponent, preset.min_weight, rng)
        if preset.name == "static-power":
            scales = (1.0,) * T
        else:
            scales = (1.0,) * change + (0.97,) * (T - change)
        return ChungLuSpec(w, scales)
    # k-community: off-diagonals 0.2, diagonal p_1..p_K, change adds 0.03
    # to the second community's within-probability.
    K = len(preset.p_within)
    b1 = np.full((K, K), 0.2)
    np.fill_diagonal(b1, preset.p_within)
    b2 = b1.copy()
    b2[1, 1] += 0.03
    B = [b1] * change + [b2] * (T - change)
    return DsbmSpec(B, _equal_split(n, K))


def noise_free_rank(preset: SystemPreset) -> int:
    """Rank of the preset's noise-free unfolded matrix: the default embedding d."""
    if preset.name in ("static-power", "moving-power"):
        return 1
    if preset.name == "k-community":
        return len(preset.p_within)
    return 2


def _sample_symmetric(P: np.ndarray, rng) -> sp.csr_matrix:
    """Bernoulli(P) on the strict upper triangle, mirrored; zero diagonal."""
    n = P.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    hits = rng.random(iu.size) < P[iu, ju]
    ii, jj = iu[hits], ju[hits]
    a = sp.coo_matrix(
        (np.ones(2 * ii.size), (np.r_[ii, jj], np.r_[jj, ii])), shape=(n, n)
    )
    return a.tocsr()


def sample_dsbm(spec: DsbmSpec, seed: int) -> DynamicNetwork:
    """Draw each upper-triangular entry Bernoulli(B^(t)[tau_i, tau_j]), mirrored."""
    rng = np.random.default_rng(seed)
    snaps = []
    for B in spec.B:
        P = B[np.ix_(spec.tau, spec.tau)]
        snaps.append(_sample_symmetric(P, rng))
    return DynamicNetwork(snaps)


def sample_chung_lu(spec: ChungLuSpec, seed: int) -> DynamicNetwork:
    """Draw entry (i, j) Bernoulli(scale_t * w_i * w_j / sum_k w_k), mirrored."""
    rng = np.random.default_rng(seed)
    w = spec.weights
    base = np.outer(w, w) / w.sum()
    snaps = []
    for scale in spec.scales:
        P = scale * base
        if P.max() > 1 + 1e-12:
            raise ValueError("edge probability exceeds 1")
        snaps.append(_sample_symmetric(np.minimum(P, 1.0), rng))
    return DynamicNetwork(snaps)


def sample_network(spec: Union[DsbmSpec, ChungLuSpec], seed: int) -> DynamicNetwork:
    if isinstance(spec, DsbmSpec):
        return sample_dsbm(spec, seed)
    return sample_chung_lu(spec, seed)


def sample_gnm(n: int, edges_per_snapshot: int, T: int, seed: int) -> DynamicNetwork:
    """Uniform sparse benchmark networks: ~m distinct undirected edges per snapshot.

    Draws m index pairs uniformly and discards duplicates/self-loops, so the
    realized edge count is slightly below m. Intended for large-scale timing
    runs where dense Bernoulli sampling is infeasible.
    """
    if edges_per_snapshot > n * (n - 1) // 4:
        raise ValueError("requested density too high for uniform pair sampling")
    rng = np.random.default_rng(seed)
    snaps = []
    for _ in range(T):
        ii = rng.integers(0, n, size=edges_per_snapshot)
        jj = rng.integers(0, n, size=edges_per_snapshot)
        keep = ii != jj
        ii, jj = ii[keep], jj[keep]
        lo, hi = np.minimum(ii, jj), np.maximum(ii, jj)
        pairs = np.unique(lo * n + hi)
        lo, hi = pairs // n, pairs % n
        a = sp.coo_matrix(
            (np.ones(2 * lo.size), (np.r_[lo, hi], np.r_[hi, lo])), shape=(n, n)
        )
        snaps.append(a.tocsr())
    return DynamicNetwork(snaps)
