"""Random-walk skip-gram embeddings: node2vec and its unfolded variant.

generate_walks produces second-order biased walks (alias-sampled neighbor
proposals, rejection for the p/q bias, edge weights scaling transition
probabilities); train_sgns fits skip-gram with negative sampling over the
walk corpus. unfolded_node2vec runs the pair on the dilated unfolded matrix
and splits the vectors into anchor and dynamic blocks; independent_node2vec
embeds each snapshot separately.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from . import kernels
from ._rng import INIT_STREAM, sm_next, stream_state, to_unit
from .graph import DynamicEmbedding, DynamicNetwork, dilate, unfold

__all__ = [
    "SkipGramConfig",
    "WalkCorpus",
    "generate_walks",
    "train_sgns",
    "sgns_pair_loss",
    "unfolded_node2vec",
    "independent_node2vec",
]

logger = logging.getLogger(__name__)

NOISE_POWER = 0.75  # unigram^(3/4) negative-sampling distribution


@dataclass(frozen=True)
class SkipGramConfig:
    """node2vec / SGNS hyperparameters (canonical defaults, all overridable)."""

    d: int = 2
    walks_per_node: int = 10
    walk_length: int = 80
    window: int = 10
    negatives_per_positive: int = 5
    epochs: int = 5
    learning_rate_initial: float = 0.025
    p_return: float = 1.0
    q_inout: float = 1.0
    seed: int = 0

    def __post_init__(self):
        counts = {
            "d": self.d,
            "walks_per_node": self.walks_per_node,
            "walk_length": self.walk_length,
            "window": self.window,
            "negatives_per_positive": self.negatives_per_positive,
        }
        for name, value in counts.items():
            if value < 1:
                raise ValueError(f"{name} must be >= 1, got {value}")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.learning_rate_initial <= 0:
            raise ValueError("learning rate must be positive")
        if self.p_return <= 0 or self.q_inout <= 0:
            raise ValueError("p and q must be positive")


@dataclass(frozen=True)
class WalkCorpus:
    """Fixed-length walks (one row each) over nodes 0..n_nodes-1."""

    walks: np.ndarray
    n_nodes: int

    def __post_init__(self):
        if self.walks.ndim != 2:
            raise ValueError("walks must be a 2-d array")

    @property
    def n_walks(self) -> int:
        return self.walks.shape[0]

    @property
    def walk_length(self) -> int:
        return self.walks.shape[1]

    def node_counts(self) -> np.ndarray:
        return np.bincount(self.walks.ravel(), minlength=self.n_nodes)

    def validate(self, adjacency: sp.csr_matrix) -> None:
        """Raise unless every consecutive walk pair is an edge."""
        a = self.walks[:, :-1].ravel()
        b = self.walks[:, 1:].ravel()
        if a.size == 0:
            return
        present = np.asarray(adjacency[a, b]).ravel()
        if not np.all(present > 0):
            bad = int(np.flatnonzero(present <= 0)[0])
            raise ValueError(
                f"walk step {a[bad]} -> {b[bad]} is not an edge of the graph"
            )


def _checked_adjacency(adjacency) -> sp.csr_matrix:
    a = sp.csr_matrix(adjacency, dtype=np.float64, copy=True)
    if a.shape[0] != a.shape[1]:
        raise ValueError("adjacency must be square")
    if (a != a.T).nnz != 0:
        raise ValueError("adjacency must be symmetric")
    if a.nnz and a.data.min() < 0:
        raise ValueError("edge weights must be non-negative")
    a.eliminate_zeros()
    a.sort_indices()
    return a


def generate_walks(adjacency, config: SkipGramConfig) -> WalkCorpus:
    """Second-order random walks from every non-isolated node.

    Reproducible under config.seed; isolated nodes contribute no walks.
    """
    a = _checked_adjacency(adjacency)
    indptr = a.indptr.astype(np.int64)
    indices = a.indices.astype(np.int64)
    prob, alias = kernels.build_alias(a.data, indptr)
    walks = kernels.simulate_walks(
        indptr,
        indices,
        prob,
        alias,
        config.walks_per_node,
        config.walk_length,
        config.p_return,
        config.q_inout,
        config.seed,
    )
    isolated = a.shape[0] - np.count_nonzero(np.diff(indptr))
    if isolated:
        logger.info("no walks for %d isolated nodes", isolated)
    return WalkCorpus(walks=walks, n_nodes=a.shape[0])


def _init_vectors(vocab: int, d: int, seed: int) -> np.ndarray:
    """word2vec-style init: input vectors uniform in [-0.5, 0.5) / d."""
    out = np.empty((vocab, d), dtype=np.float64)
    state = stream_state(seed, INIT_STREAM)
    for i in range(vocab):
        for k in range(d):
            state, z = sm_next(state)
            out[i, k] = (to_unit(z) - 0.5) / d
    return out


def train_sgns(
    corpus: WalkCorpus,
    vocab_size: int,
    config: SkipGramConfig,
    return_context_vectors: bool = False,
):
    """SGNS embedding of the corpus: one d-vector per node.

    Negatives are drawn from the unigram^(3/4) distribution of the corpus.
    With epochs=0 the (finite, random) initialization is returned unchanged.
    """
    if corpus.n_walks == 0:
        raise ValueError("cannot train on an empty walk corpus")
    if corpus.walks.max() >= vocab_size:
        raise ValueError("corpus references nodes outside the vocabulary")
    w_in = _init_vectors(vocab_size, config.d, config.seed)
    w_out = np.zeros((vocab_size, config.d), dtype=np.float64)
    if config.epochs > 0:
        noise = corpus.node_counts().astype(np.float64) ** NOISE_POWER
        noise_ptr = np.array([0, vocab_size], dtype=np.int64)
        noise_prob, noise_alias = kernels.build_alias(noise, noise_ptr)
        kernels.train_sgns(
            corpus.walks,
            config.window,
            config.negatives_per_positive,
            config.epochs,
            config.learning_rate_initial,
            config.seed,
            noise_prob,
            noise_alias,
            w_in,
            w_out,
        )
    if return_context_vectors:
        return w_in, w_out
    return w_in


def sgns_pair_loss(
    w_in: np.ndarray,
    w_out: np.ndarray,
    positives: np.ndarray,
    negatives: np.ndarray,
) -> float:
    """Mean SGNS objective over fixed positive pairs and negative targets.

    ``positives`` is (m, 2) center/context indices; ``negatives`` is (m, k)
    noise targets scored against the same centers.
    """
    centers, contexts = positives[:, 0], positives[:, 1]
    pos_scores = np.einsum("ij,ij->i", w_in[centers], w_out[contexts])
    neg_scores = np.einsum("ij,ikj->ik", w_in[centers], w_out[negatives])
    pos_loss = np.logaddexp(0.0, -pos_scores)
    neg_loss = np.logaddexp(0.0, neg_scores).sum(axis=1)
    return float(np.mean(pos_loss + neg_loss))


def unfolded_node2vec(
    network: DynamicNetwork, config: SkipGramConfig
) -> DynamicEmbedding:
    """node2vec on the dilated unfolded matrix, split into anchor + dynamic."""
    dil = dilate(unfold(network))
    corpus = generate_walks(dil.data, config)
    vectors = train_sgns(corpus, dil.shape[0], config)
    n = network.n
    return DynamicEmbedding(
        anchor=vectors[:n], dynamic=vectors[n:], n=network.n, T=network.T
    )


def independent_node2vec(
    network: DynamicNetwork, config: SkipGramConfig
) -> DynamicEmbedding:
    """Static node2vec per snapshot; time points live in unrelated spaces."""
    points = []
    for t, snapshot in enumerate(network.snapshots):
        seed_t = int(
            np.random.SeedSequence([int(config.seed) & (2**63 - 1), t]).generate_state(1)[0]
        )
        cfg = replace(config, seed=seed_t)
        corpus = generate_walks(snapshot, cfg)
        if corpus.n_walks == 0:
            points.append(_init_vectors(network.n, config.d, seed_t))
            continue
        points.append(train_sgns(corpus, network.n, cfg))
    return DynamicEmbedding(
        anchor=np.zeros((0, config.d)),
        dynamic=np.vstack(points),
        n=network.n,
        T=network.T,
    )
