"""Spectral dynamic embedding methods.

Unfolded methods (UASE, dilated ASE, URLSE) embed the whole series jointly
through the unfolded/dilated matrix and produce an anchor block alongside the
dynamic block. ISE and OMNI are the per-snapshot and omnibus baselines; they
have no anchor.

Dimension convention: for methods operating on the dilated matrix the
user-facing d selects rank 2d internally, because the dilation carries each
singular value of the unfolded matrix as a +/- eigenvalue pair. Their output
therefore has 2d columns. ISE and OMNI use d directly.
"""

from __future__ import annotations

import logging

import numpy as np
import scipy.sparse as sp

from .graph import DilatedMatrix, DynamicEmbedding, DynamicNetwork, dilate, unfold
from .linalg import (
    flip_to_positive_sum,
    procrustes_align,
    truncated_eig_by_magnitude,
    truncated_svd,
)

__all__ = [
    "uase",
    "dilated_ase",
    "urlse",
    "ise",
    "ise_procrustes",
    "omni",
    "average_degree",
]

logger = logging.getLogger(__name__)

_SPECTRUM_FLOOR = 1e-12


def _snapshot_seed(seed: int, t: int) -> int:
    return int(np.random.SeedSequence([int(seed) & (2**63 - 1), t]).generate_state(1)[0])


def uase(network: DynamicNetwork, d: int, seed: int = 0) -> DynamicEmbedding:
    """Unfolded adjacency spectral embedding.

    Rank-d SVD of the unfolded matrix; anchor = U S^(1/2), dynamic = V S^(1/2).
    """
    svd = truncated_svd(unfold(network).data, d, seed)
    scale = np.sqrt(svd.S)
    return DynamicEmbedding(
        anchor=svd.U * scale, dynamic=svd.V * scale, n=network.n, T=network.T
    )


def _eig_embedding(matrix, rank: int, seed: int) -> np.ndarray:
    eig = truncated_eig_by_magnitude(matrix, rank, seed)
    if np.abs(eig.values).max() <= _SPECTRUM_FLOOR:
        raise ValueError("no nonzero spectrum: cannot embed an empty matrix")
    return eig.vectors * np.sqrt(np.abs(eig.values))


def dilated_ase(network: DynamicNetwork, d: int, seed: int = 0) -> DynamicEmbedding:
    """Adjacency spectral embedding of the dilated unfolded matrix.

    Rank-2d eigendecomposition U |Lambda|^(1/2); the first n rows are the
    anchor block and the remaining nT rows the dynamic block, each with 2d
    columns carrying the +/- pair structure of the dilation spectrum.
    """
    dil = dilate(unfold(network))
    emb = _eig_embedding(dil.data, 2 * d, seed)
    n = network.n
    return DynamicEmbedding(
        anchor=emb[:n], dynamic=emb[n:], n=network.n, T=network.T
    )


def average_degree(dilated: DilatedMatrix) -> float:
    """Mean weighted degree of the dilated matrix (the default regularizer)."""
    return float(dilated.data.sum() / dilated.data.shape[0])


def urlse(
    network: DynamicNetwork,
    d: int,
    gamma: float | None = None,
    seed: int = 0,
) -> DynamicEmbedding:
    """Unfolded regularized Laplacian spectral embedding.

    The dilated matrix A is normalized as D_gamma^(-1/2) A D_gamma^(-1/2)
    with D_gamma = D + gamma I, then embedded like dilated ASE. gamma
    defaults to the average node degree of the dilated matrix. With gamma=0
    a zero-degree node keeps a zero embedding row (its normalizer is treated
    as zero and a diagnostic is logged).
    """
    if gamma is not None and gamma < 0:
        raise ValueError("gamma must be non-negative")
    dil = dilate(unfold(network))
    if gamma is None:
        gamma = average_degree(dil)
    deg = np.asarray(dil.data.sum(axis=1)).ravel()
    reg = deg + gamma
    if np.any(reg == 0):
        logger.warning(
            "%d zero-degree nodes with gamma=0: their embedding rows are zero",
            int((reg == 0).sum()),
        )
    with np.errstate(divide="ignore"):
        dinv = np.where(reg > 0, 1.0 / np.sqrt(reg), 0.0)
    scaler = sp.diags(dinv)
    normalized = (scaler @ dil.data @ scaler).tocsr()
    emb = _eig_embedding(normalized, 2 * d, seed)
    n = network.n
    return DynamicEmbedding(
        anchor=emb[:n], dynamic=emb[n:], n=network.n, T=network.T
    )


def _ase_positive_sum(snapshot: sp.csr_matrix, d: int, seed: int) -> np.ndarray:
    """Per-snapshot ASE with the positive-eigenvector-sum sign rule."""
    eig = truncated_eig_by_magnitude(snapshot, d, seed)
    vectors = flip_to_positive_sum(eig.vectors)
    return vectors * np.sqrt(np.abs(eig.values))


def ise(network: DynamicNetwork, d: int, seed: int = 0) -> DynamicEmbedding:
    """Independent spectral embedding: one rank-d ASE per snapshot, no anchor."""
    if d > network.n:
        raise ValueError(f"d={d} exceeds node count {network.n}")
    points = [
        _ase_positive_sum(a, d, _snapshot_seed(seed, t))
        for t, a in enumerate(network.snapshots)
    ]
    return DynamicEmbedding(
        anchor=np.zeros((0, d)),
        dynamic=np.vstack(points),
        n=network.n,
        T=network.T,
    )


def ise_procrustes(network: DynamicNetwork, d: int, seed: int = 0) -> DynamicEmbedding:
    """ISE with each time point Procrustes-aligned to its aligned predecessor."""
    base = ise(network, d, seed)
    points = [base.time_point(0).copy()]
    for t in range(1, network.T):
        points.append(procrustes_align(points[-1], base.time_point(t)))
    return DynamicEmbedding(
        anchor=np.zeros((0, d)),
        dynamic=np.vstack(points),
        n=network.n,
        T=network.T,
    )


def omni(network: DynamicNetwork, d: int, seed: int = 0) -> DynamicEmbedding:
    """Omnibus embedding: rank-d ASE of the nT x nT pairwise-average block matrix."""
    T = network.T
    snaps = network.snapshots
    blocks = [[None] * T for _ in range(T)]
    for s in range(T):
        for t in range(s, T):
            avg = snaps[s] if s == t else ((snaps[s] + snaps[t]) * 0.5).tocsr()
            blocks[s][t] = avg
            blocks[t][s] = avg
    M = sp.bmat(blocks, format="csr")
    emb = _eig_embedding(M, d, seed)
    return DynamicEmbedding(
        anchor=np.zeros((0, d)), dynamic=emb, n=network.n, T=network.T
    )
