import numpy as np
import pytest
import scipy.sparse as sp

from dynembed import DynamicNetwork


def dense_network(arrays) -> DynamicNetwork:
    return DynamicNetwork([sp.csr_matrix(np.asarray(a, dtype=float)) for a in arrays])


def gap_separated_network(n: int, T: int, K: int, seed: int) -> DynamicNetwork:
    """DSBM sample with a strong rank-K signal, so the top-K singular values
    of the unfolded matrix sit well above the noise bulk."""
    from dynembed import DsbmSpec, sample_dsbm

    rng = np.random.default_rng(seed)
    tau = np.sort(rng.integers(0, K, size=n))
    tau[:K] = np.arange(K)  # every community non-empty
    mats = []
    for t in range(T):
        b = np.full((K, K), 0.1)
        np.fill_diagonal(b, 0.85 - 0.04 * (t % 2) + 0.03 * np.arange(K) / max(K, 1))
        mats.append(b)
    return sample_dsbm(DsbmSpec(mats, tau), seed=seed + 1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_symmetric_sparse(n: int, density: float, seed: int) -> sp.csr_matrix:
    rng = np.random.default_rng(seed)
    upper = sp.random(n, n, density=density, random_state=rng, format="coo")
    upper = sp.triu(upper, k=1)
    sym = upper + upper.T
    return sym.tocsr()
