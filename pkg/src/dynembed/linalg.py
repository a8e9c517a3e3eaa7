"""Truncated spectral decompositions with deterministic sign conventions.

Three paths by problem size, all deterministic functions of (matrix, rank,
seed): dense LAPACK when the requested rank is near the dimension, ARPACK
with a seeded start vector for moderate sparse problems (machine-accurate
leading triplets, which the oracle comparisons rely on), and a randomized
range finder (oversampling 10, four power iterations) for very large inputs,
where Krylov solvers stall trying to resolve the clustered bulk that large
sparse networks carry. Orthogonal Procrustes alignment lives here too.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh, svds

__all__ = [
    "ConvergenceError",
    "TruncatedSvd",
    "TruncatedEig",
    "truncated_svd",
    "truncated_eig_by_magnitude",
    "procrustes_align",
    "flip_to_positive_max_entry",
    "flip_to_positive_sum",
]

_MAXITER = 300
_ARPACK_CUTOFF = 4096  # beyond this min-dimension, use the randomized path
_OVERSAMPLE = 10
_POWER_ITERS = 4


class ConvergenceError(RuntimeError):
    """Solver failed to reach the requested accuracy within the iteration cap."""


@dataclass(frozen=True)
class TruncatedSvd:
    """Leading singular triplets: U (m x d), S (descending), V (k x d)."""

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray


@dataclass(frozen=True)
class TruncatedEig:
    """Leading eigenpairs by |lambda|: values (r,), vectors (m x r)."""

    values: np.ndarray
    vectors: np.ndarray


def flip_to_positive_max_entry(U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Flip each column so its largest-magnitude entry is positive.

    Ties break at the lowest row index. Returns the flipped matrix and the
    per-column signs applied, so paired factors can be flipped consistently.
    """
    if U.shape[0] == 0:
        return U, np.ones(U.shape[1])
    rows = np.abs(U).argmax(axis=0)
    signs = np.sign(U[rows, np.arange(U.shape[1])])
    signs[signs == 0] = 1.0
    return U * signs, signs


def flip_to_positive_sum(U: np.ndarray) -> np.ndarray:
    """Flip each column so its entry sum is positive (zero sums are left alone)."""
    signs = np.sign(U.sum(axis=0))
    signs[signs == 0] = 1.0
    return U * signs


def _use_dense(smallest_dim: int, rank: int) -> bool:
    # ARPACK needs rank < dim and degrades near it; small problems are
    # cheaper dense anyway.
    return smallest_dim <= max(2 * rank + 1, 20)


def _seeded_start(length: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal(length)


def _randomized_svd(M, d: int, seed: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Range-finder SVD: best-effort rank-d factors at fixed power budget."""
    m, k = M.shape
    rng = np.random.default_rng(seed)
    width = min(d + _OVERSAMPLE, min(m, k))
    Q = np.linalg.qr(M @ rng.standard_normal((k, width)))[0]
    for _ in range(_POWER_ITERS):
        Z = np.linalg.qr(M.T @ Q)[0]
        Q = np.linalg.qr(M @ Z)[0]
    B = Q.T @ M
    Ub, S, Vt = np.linalg.svd(B, full_matrices=False)
    return Q @ Ub[:, :d], S[:d], Vt[:d].T


def truncated_svd(M, d: int, seed: int = 0) -> TruncatedSvd:
    """Rank-d truncated SVD of a (sparse) matrix, deterministic under seed.

    Singular values are returned in descending order and each left singular
    vector is flipped so its largest-magnitude entry is positive, with the
    matching right vector flipped along.
    """
    m, k = M.shape
    if not 1 <= d <= min(m, k):
        raise ValueError(f"rank d={d} out of range [1, {min(m, k)}]")
    if _use_dense(min(m, k), d):
        dense = M.toarray() if sp.issparse(M) else np.asarray(M, dtype=np.float64)
        U, S, Vt = np.linalg.svd(dense, full_matrices=False)
        U, S, V = U[:, :d], S[:d], Vt[:d].T
    elif min(m, k) > _ARPACK_CUTOFF:
        U, S, V = _randomized_svd(M.astype(np.float64), d, seed)
    else:
        try:
            U, S, Vt = svds(
                M.astype(np.float64),
                k=d,
                v0=_seeded_start(min(m, k), seed),
                maxiter=_MAXITER,
                solver="arpack",
            )
        except (ArpackNoConvergence, ArpackError) as exc:
            raise ConvergenceError(
                f"rank-{d} SVD did not converge within {_MAXITER} iterations"
            ) from exc
        order = np.argsort(S)[::-1]
        U, S, V = U[:, order], S[order], Vt[order].T
    U, signs = flip_to_positive_max_entry(U)
    return TruncatedSvd(U=U, S=S, V=V * signs)


def truncated_eig_by_magnitude(A, r: int, seed: int = 0) -> TruncatedEig:
    """The r largest-|lambda| eigenpairs of a symmetric matrix.

    Eigenvalues are ordered by descending magnitude, positive before negative
    on magnitude ties (the +/- pairs of a dilated matrix come out adjacent).
    Eigenvectors use the positive-largest-entry sign convention.
    """
    m = A.shape[0]
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got {A.shape}")
    if not 1 <= r <= m:
        raise ValueError(f"rank r={r} out of range [1, {m}]")
    if _use_dense(m, r):
        dense = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=np.float64)
        values, vectors = np.linalg.eigh(dense)
    elif m > _ARPACK_CUTOFF:
        values, vectors = _randomized_eig(A.astype(np.float64), r, seed)
    else:
        try:
            values, vectors = eigsh(
                A.astype(np.float64),
                k=r,
                which="LM",
                v0=_seeded_start(m, seed),
                maxiter=_MAXITER,
            )
        except (ArpackNoConvergence, ArpackError) as exc:
            raise ConvergenceError(
                f"rank-{r} eigendecomposition did not converge "
                f"within {_MAXITER} iterations"
            ) from exc
    order = _magnitude_order(values)[:r]
    values, vectors = values[order], vectors[:, order]
    vectors, _ = flip_to_positive_max_entry(vectors)
    return TruncatedEig(values=values, vectors=vectors)


def _randomized_eig(A, r: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Subspace iteration plus Rayleigh-Ritz: signed eigenvalues come from the
    projected symmetric problem."""
    m = A.shape[0]
    rng = np.random.default_rng(seed)
    width = min(r + _OVERSAMPLE, m)
    Q = np.linalg.qr(A @ rng.standard_normal((m, width)))[0]
    for _ in range(_POWER_ITERS):
        Q = np.linalg.qr(A @ Q)[0]
    H = Q.T @ (A @ Q)
    values, W = np.linalg.eigh((H + H.T) / 2.0)
    return values, Q @ W


def _magnitude_order(values: np.ndarray, rtol: float = 1e-9) -> np.ndarray:
    """Indices ordering eigenvalues by descending |lambda|, positive first
    within magnitude ties (the +/- sigma pairs of a dilation match only to
    floating precision, so ties are resolved with a relative tolerance)."""
    mag = np.abs(values)
    order = np.argsort(-mag, kind="stable")
    scale = mag.max()
    if scale == 0:
        return order
    i = 0
    while i < order.size:
        j = i + 1
        while j < order.size and mag[order[i]] - mag[order[j]] <= rtol * scale:
            j += 1
        if j - i > 1:
            group = order[i:j]
            order[i:j] = group[np.argsort(-values[group], kind="stable")]
        i = j
    return order


def procrustes_align(target: np.ndarray, source: np.ndarray) -> np.ndarray:
    """Rotate ``source`` onto ``target``: source @ Q with orthogonal Q
    minimizing ||source @ Q - target||_F (closed form via SVD of
    source^T target)."""
    target = np.asarray(target, dtype=np.float64)
    source = np.asarray(source, dtype=np.float64)
    if target.shape != source.shape:
        raise ValueError(
            f"shape mismatch: target {target.shape} vs source {source.shape}"
        )
    u, _, vt = np.linalg.svd(source.T @ target)
    return source @ (u @ vt)
