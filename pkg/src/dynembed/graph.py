"""Sparse dynamic-network containers: unfolding, dilation and embedding slices.

A dynamic network is a sequence of T symmetric n x n adjacency snapshots.
Column-concatenating the snapshots gives the n x nT unfolded matrix; placing
that matrix off-diagonally in a zero-padded square matrix gives its symmetric
dilation, which is the input every "unfolded" embedding method operates on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
import scipy.sparse as sp

__all__ = [
    "DynamicNetwork",
    "UnfoldedMatrix",
    "DilatedMatrix",
    "DynamicEmbedding",
    "unfold",
    "dilate",
    "split_dynamic",
]


def _as_canonical_csr(matrix) -> sp.csr_matrix:
    """Copy to CSR with sorted indices, no duplicates, no stored zeros."""
    a = sp.csr_matrix(matrix, dtype=np.float64, copy=True)
    a.sum_duplicates()
    a.eliminate_zeros()
    a.sort_indices()
    return a


def _freeze(a: sp.csr_matrix) -> sp.csr_matrix:
    for buf in (a.data, a.indices, a.indptr):
        buf.flags.writeable = False
    return a


@dataclass(frozen=True)
class DynamicNetwork:
    """T symmetric sparse adjacency snapshots over a fixed node set.

    Entries are non-negative edge weights; 1 for simple graphs, larger
    integers for multigraph data (e.g. flight counts). Node identity is
    positional; ``node_labels`` is display-only metadata.
    """

    snapshots: tuple[sp.csr_matrix, ...]
    node_labels: tuple[str, ...] | None = None

    def __init__(self, snapshots: Sequence, node_labels: Sequence[str] | None = None):
        if len(snapshots) == 0:
            raise ValueError("a dynamic network needs at least one snapshot")
        mats = []
        n = None
        for t, snap in enumerate(snapshots):
            a = _as_canonical_csr(snap)
            if a.shape[0] != a.shape[1]:
                raise ValueError(f"snapshot {t} is not square: {a.shape}")
            if n is None:
                n = a.shape[0]
            elif a.shape[0] != n:
                raise ValueError(
                    f"snapshot {t} has {a.shape[0]} nodes, expected {n}"
                )
            if a.nnz and not np.all(np.isfinite(a.data)):
                raise ValueError(f"snapshot {t} has non-finite entries")
            if a.nnz and a.data.min() < 0:
                raise ValueError(f"snapshot {t} has negative entries")
            if (a != a.T).nnz != 0:
                raise ValueError(f"snapshot {t} is not symmetric")
            mats.append(_freeze(a))
        if n is None or n < 1:
            raise ValueError("need at least one node")
        if node_labels is not None:
            node_labels = tuple(str(x) for x in node_labels)
            if len(node_labels) != n:
                raise ValueError(
                    f"{len(node_labels)} labels for {n} nodes"
                )
        object.__setattr__(self, "snapshots", tuple(mats))
        object.__setattr__(self, "node_labels", node_labels)

    @property
    def n(self) -> int:
        return self.snapshots[0].shape[0]

    @property
    def T(self) -> int:
        return len(self.snapshots)

    def __iter__(self) -> Iterator[sp.csr_matrix]:
        return iter(self.snapshots)


@dataclass(frozen=True)
class UnfoldedMatrix:
    """Column concatenation of the T snapshots, shape n x nT."""

    data: sp.csr_matrix
    n: int
    T: int

    def time_block(self, t: int) -> sp.csr_matrix:
        if not 0 <= t < self.T:
            raise IndexError(f"time index {t} out of range [0, {self.T})")
        return self.data[:, t * self.n : (t + 1) * self.n]


@dataclass(frozen=True)
class DilatedMatrix:
    """Symmetric dilation [[0, U], [U^T, 0]] of an unfolded matrix.

    Shape (n + nT) x (n + nT); the first n indices are anchor copies of the
    nodes, the remaining nT indices are their per-snapshot dynamic copies.
    """

    data: sp.csr_matrix
    n: int
    T: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape


@dataclass(frozen=True)
class DynamicEmbedding:
    """Anchor block (n x d, possibly empty) plus dynamic block (nT x d).

    Row block t of ``dynamic`` (rows n*t .. n*(t+1)) is the embedding of the
    nodes at time point t. Methods without a time-invariant representation
    (ISE, OMNI, independent node2vec) carry an empty anchor.
    """

    anchor: np.ndarray
    dynamic: np.ndarray
    n: int
    T: int
    d: int = field(default=0)

    def __init__(self, anchor: np.ndarray, dynamic: np.ndarray, n: int, T: int):
        anchor = np.ascontiguousarray(anchor, dtype=np.float64)
        dynamic = np.ascontiguousarray(dynamic, dtype=np.float64)
        if anchor.ndim != 2 or dynamic.ndim != 2:
            raise ValueError("anchor and dynamic must be 2-d arrays")
        if dynamic.shape != (n * T, anchor.shape[1]):
            raise ValueError(
                f"dynamic block has shape {dynamic.shape}, "
                f"expected ({n * T}, {anchor.shape[1]})"
            )
        if anchor.shape[0] not in (0, n):
            raise ValueError(f"anchor must have 0 or {n} rows, got {anchor.shape[0]}")
        if not (np.all(np.isfinite(anchor)) and np.all(np.isfinite(dynamic))):
            raise ValueError("embedding has non-finite entries")
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(self, "dynamic", dynamic)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "d", anchor.shape[1])

    @property
    def has_anchor(self) -> bool:
        return self.anchor.shape[0] > 0

    def time_point(self, t: int) -> np.ndarray:
        return split_dynamic(self, t)

    def iter_time_points(self) -> Iterator[np.ndarray]:
        for t in range(self.T):
            yield split_dynamic(self, t)


def unfold(network: DynamicNetwork) -> UnfoldedMatrix:
    """Column-concatenate the snapshots in time order."""
    data = sp.hstack(network.snapshots, format="csr")
    data.sort_indices()
    return UnfoldedMatrix(data=_freeze(data), n=network.n, T=network.T)


def dilate(unfolded: UnfoldedMatrix) -> DilatedMatrix:
    """Symmetric dilation of an unfolded matrix.

    The result has twice the nonzeros of the input, zero diagonal blocks,
    and eigenvalues occurring in +/- sigma pairs for every singular value
    sigma of the input.
    """
    m = unfolded.data
    data = sp.bmat([[None, m], [m.T, None]], format="csr")
    data.sort_indices()
    return DilatedMatrix(data=_freeze(data), n=unfolded.n, T=unfolded.T)


def split_dynamic(embedding: DynamicEmbedding, t: int) -> np.ndarray:
    """Rows n*t .. n*(t+1) of the dynamic block: time point t."""
    if not 0 <= t < embedding.T:
        raise IndexError(f"time index {t} out of range [0, {embedding.T})")
    n = embedding.n
    return embedding.dynamic[n * t : n * (t + 1)]
