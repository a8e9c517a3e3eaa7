import numpy as np
import pytest
import scipy.sparse as sp
from scipy.stats import ks_2samp

from dynembed import (
    DynamicNetwork,
    SkipGramConfig,
    generate_walks,
    independent_node2vec,
    train_sgns,
    unfolded_node2vec,
)
from dynembed import dilate, unfold
from dynembed.kernels import COMPILED_AVAILABLE
from dynembed.skipgram import NOISE_POWER, _init_vectors, sgns_pair_loss

from conftest import dense_network, gap_separated_network


def path_graph(n):
    a = np.zeros((n, n))
    for i in range(n - 1):
        a[i, i + 1] = a[i + 1, i] = 1.0
    return sp.csr_matrix(a)


def two_cliques(size):
    a = np.zeros((2 * size, 2 * size))
    a[:size, :size] = 1.0
    a[size:, size:] = 1.0
    np.fill_diagonal(a, 0.0)
    return sp.csr_matrix(a)


class TestGenerateWalks:
    def test_uniform_next_step_from_path_center(self):
        # exact transition oracle: from the middle of 0-1-2 with p=q=1 the
        # next node is 0 or 2 with probability 1/2 each
        cfg = SkipGramConfig(walks_per_node=6000, walk_length=2, seed=0)
        corpus = generate_walks(path_graph(3), cfg)
        from_center = corpus.walks[corpus.walks[:, 0] == 1]
        freq = np.mean(from_center[:, 1] == 0)
        se = 0.5 / np.sqrt(from_center.shape[0])
        assert abs(freq - 0.5) < 3 * se

    def test_return_dominates_as_p_shrinks(self):
        # second step from an endpoint of a path: return bias 1/p vs 1/q out
        p = 0.05
        cfg = SkipGramConfig(walks_per_node=4000, walk_length=3, p_return=p, seed=1)
        corpus = generate_walks(path_graph(3), cfg)
        from_end = corpus.walks[corpus.walks[:, 0] == 0]
        # walk 0 -> 1 -> {0 (return, weight 1/p) or 2 (distance 2, weight 1)}
        expected = (1 / p) / (1 / p + 1.0)
        freq = np.mean(from_end[:, 2] == 0)
        se = np.sqrt(expected * (1 - expected) / from_end.shape[0])
        assert abs(freq - expected) < 3 * se

    def test_biased_transitions_match_exact_oracle(self):
        # triangle plus pendant: all three bias cases reachable
        a = np.zeros((4, 4))
        for i, j, w in [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 1.0), (2, 3, 1.5)]:
            a[i, j] = a[j, i] = w
        adj = sp.csr_matrix(a)
        p, q = 0.7, 1.8
        cfg = SkipGramConfig(walks_per_node=8000, walk_length=3, p_return=p, q_inout=q, seed=2)
        corpus = generate_walks(adj, cfg)
        # condition on (prev=0, cur=2): neighbors 0 (return), 1 (shared), 3 (far)
        rows = corpus.walks[(corpus.walks[:, 0] == 0) & (corpus.walks[:, 1] == 2)]
        weights = {0: 1.0 / p, 1: 2.0, 3: 1.5 / q}
        total = sum(weights.values())
        counts = {k: np.mean(rows[:, 2] == k) for k in weights}
        for k, w in weights.items():
            expect = w / total
            se = np.sqrt(expect * (1 - expect) / rows.shape[0])
            assert abs(counts[k] - expect) < 3 * se, (k, counts[k], expect)

    def test_edge_weights_scale_proposals(self):
        a = np.zeros((3, 3))
        a[0, 1] = a[1, 0] = 1.0
        a[0, 2] = a[2, 0] = 3.0
        cfg = SkipGramConfig(walks_per_node=6000, walk_length=2, seed=3)
        corpus = generate_walks(sp.csr_matrix(a), cfg)
        start0 = corpus.walks[corpus.walks[:, 0] == 0]
        freq = np.mean(start0[:, 1] == 2)
        se = np.sqrt(0.75 * 0.25 / start0.shape[0])
        assert abs(freq - 0.75) < 3 * se

    def test_isolated_node_emits_no_walks(self):
        a = np.zeros((4, 4))
        a[0, 1] = a[1, 0] = 1.0  # nodes 2, 3 isolated
        cfg = SkipGramConfig(walks_per_node=5, walk_length=4, seed=0)
        corpus = generate_walks(sp.csr_matrix(a), cfg)
        assert corpus.n_walks == 2 * 5
        assert not np.isin([2, 3], corpus.walks).any()

    def test_every_corpus_step_is_an_edge(self):
        net = gap_separated_network(20, 2, 2, seed=4)
        adj = dilate(unfold(net)).data
        cfg = SkipGramConfig(walks_per_node=4, walk_length=20, p_return=0.5, q_inout=2.0, seed=5)
        corpus = generate_walks(adj, cfg)
        corpus.validate(adj)

    def test_validate_catches_non_edges(self):
        from dynembed.skipgram import WalkCorpus

        corpus = WalkCorpus(walks=np.array([[0, 2]]), n_nodes=3)
        with pytest.raises(ValueError, match="not an edge"):
            corpus.validate(path_graph(3))

    def test_rejects_asymmetric_adjacency(self):
        cfg = SkipGramConfig()
        with pytest.raises(ValueError, match="symmetric"):
            generate_walks(sp.csr_matrix(np.triu(np.ones((3, 3)), 1)), cfg)


class TestTrainSgns:
    def test_disconnected_cliques_separate(self):
        adj = two_cliques(6)
        cfg = SkipGramConfig(
            d=2, walks_per_node=8, walk_length=20, window=4, epochs=3, seed=6
        )
        corpus = generate_walks(adj, cfg)
        vecs = train_sgns(corpus, 12, cfg)
        unit = vecs / np.linalg.norm(vecs, axis=1, keepdims=True)
        cos = unit @ unit.T
        within = np.concatenate([cos[:6, :6][np.triu_indices(6, 1)],
                                 cos[6:, 6:][np.triu_indices(6, 1)]])
        cross = cos[:6, 6:].ravel()
        assert within.mean() > cross.mean()

    def test_zero_epochs_returns_initialization(self):
        adj = path_graph(5)
        cfg = SkipGramConfig(d=3, walks_per_node=2, walk_length=5, epochs=0, seed=7)
        corpus = generate_walks(adj, cfg)
        vecs = train_sgns(corpus, 5, cfg)
        assert np.array_equal(vecs, _init_vectors(5, 3, 7))
        assert np.all(np.isfinite(vecs))

    def test_deterministic_under_seed(self):
        adj = two_cliques(4)
        cfg = SkipGramConfig(d=2, walks_per_node=3, walk_length=8, epochs=2, seed=8)
        corpus = generate_walks(adj, cfg)
        assert np.array_equal(train_sgns(corpus, 8, cfg), train_sgns(corpus, 8, cfg))

    def test_empty_corpus_rejected(self):
        from dynembed.skipgram import WalkCorpus

        cfg = SkipGramConfig()
        with pytest.raises(ValueError, match="empty"):
            train_sgns(WalkCorpus(walks=np.empty((0, 5), dtype=np.int64), n_nodes=3), 3, cfg)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_loss_decreases_on_held_positives(self, seed):
        adj = two_cliques(5)
        cfg = SkipGramConfig(d=3, walks_per_node=6, walk_length=15, epochs=3, seed=seed)
        corpus = generate_walks(adj, cfg)
        rng = np.random.default_rng(seed)
        # held positives: co-window pairs from the corpus
        rows = rng.integers(0, corpus.n_walks, 200)
        cols = rng.integers(0, corpus.walk_length - 1, 200)
        positives = np.stack(
            [corpus.walks[rows, cols], corpus.walks[rows, cols + 1]], axis=1
        )
        negatives = rng.integers(0, 10, (200, 5))
        w_in0 = _init_vectors(10, 3, seed)
        w_out0 = np.zeros((10, 3))
        before = sgns_pair_loss(w_in0, w_out0, positives, negatives)
        w_in, w_out = train_sgns(corpus, 10, cfg, return_context_vectors=True)
        after = sgns_pair_loss(w_in, w_out, positives, negatives)
        assert after < before


class TestKernelParity:
    @pytest.mark.skipif(not COMPILED_AVAILABLE, reason="extension not built")
    def test_compiled_and_pure_agree_bitwise(self):
        from dynembed import _ckernels, _pykernels

        net = gap_separated_network(16, 2, 2, seed=9)
        a = dilate(unfold(net)).data
        indptr = a.indptr.astype(np.int64)
        indices = a.indices.astype(np.int64)
        data = np.array(a.data)
        p1, a1 = _ckernels.build_alias(data, indptr)
        p2, a2 = _pykernels.build_alias(data, indptr)
        assert np.array_equal(p1, p2) and np.array_equal(a1, a2)
        for p, q in [(1.0, 1.0), (0.25, 3.0)]:
            w1 = _ckernels.simulate_walks(indptr, indices, p1, a1, 3, 11, p, q, 99)
            w2 = _pykernels.simulate_walks(indptr, indices, p2, a2, 3, 11, p, q, 99)
            assert np.array_equal(w1, w2)
        vocab = a.shape[0]
        noise = np.bincount(w1.ravel(), minlength=vocab).astype(np.float64) ** NOISE_POWER
        nptr = np.array([0, vocab], dtype=np.int64)
        np1, na1 = _ckernels.build_alias(noise, nptr)
        np2, na2 = _pykernels.build_alias(noise, nptr)
        assert np.array_equal(np1, np2) and np.array_equal(na1, na2)
        w_in1 = _init_vectors(vocab, 2, 5)
        w_out1 = np.zeros((vocab, 2))
        w_in2, w_out2 = w_in1.copy(), w_out1.copy()
        _ckernels.train_sgns(w1, 4, 3, 2, 0.025, 5, np1, na1, w_in1, w_out1)
        _pykernels.train_sgns(w1, 4, 3, 2, 0.025, 5, np2, na2, w_in2, w_out2)
        assert np.array_equal(w_in1, w_in2)
        assert np.array_equal(w_out1, w_out2)


class TestNode2vecVariants:
    def test_unfolded_walks_alternate_blocks(self):
        net = gap_separated_network(15, 2, 2, seed=10)
        adj = dilate(unfold(net)).data
        cfg = SkipGramConfig(walks_per_node=3, walk_length=12, seed=11)
        corpus = generate_walks(adj, cfg)
        anchor_side = corpus.walks < net.n
        assert np.all(anchor_side[:, :-1] != anchor_side[:, 1:])

    def test_unfolded_split_shapes(self):
        net = gap_separated_network(12, 3, 2, seed=12)
        cfg = SkipGramConfig(d=2, walks_per_node=2, walk_length=8, epochs=1, seed=13)
        emb = unfolded_node2vec(net, cfg)
        assert emb.anchor.shape == (12, 2)
        assert emb.dynamic.shape == (36, 2)

    def test_independent_single_snapshot_equals_static(self):
        net = gap_separated_network(10, 1, 2, seed=14)
        cfg = SkipGramConfig(d=2, walks_per_node=2, walk_length=8, epochs=1, seed=15)
        emb = independent_node2vec(net, cfg)
        seed0 = int(np.random.SeedSequence([15, 0]).generate_state(1)[0])
        from dataclasses import replace

        cfg0 = replace(cfg, seed=seed0)
        corpus = generate_walks(net.snapshots[0], cfg0)
        expected = train_sgns(corpus, 10, cfg0)
        assert np.array_equal(emb.dynamic, expected)

    def test_identical_snapshots_differ_across_time(self):
        a = gap_separated_network(12, 1, 2, seed=16).snapshots[0]
        net = DynamicNetwork([a, a])
        cfg = SkipGramConfig(d=2, walks_per_node=2, walk_length=8, epochs=1, seed=17)
        emb = independent_node2vec(net, cfg)
        assert not np.array_equal(emb.time_point(0), emb.time_point(1))

    def test_independent_two_clique_separability(self):
        net = DynamicNetwork([two_cliques(5)])
        cfg = SkipGramConfig(
            d=2, walks_per_node=8, walk_length=20, window=4, epochs=3, seed=18
        )
        emb = independent_node2vec(net, cfg)
        unit = emb.dynamic / np.linalg.norm(emb.dynamic, axis=1, keepdims=True)
        cos = unit @ unit.T
        within = np.concatenate([cos[:5, :5][np.triu_indices(5, 1)],
                                 cos[5:, 5:][np.triu_indices(5, 1)]])
        assert within.mean() > cos[:5, 5:].mean()


@pytest.mark.slow
class TestLabelInvariance:
    def test_pairwise_distance_distribution_matches_under_relabeling(self):
        # distributional check for node2vec label-invariance: cosine-distance
        # matrices of embed(PI A PI^T), conjugated back, match embed(A) across
        # seeds entrywise (two-sample KS per entry, 1% level)
        from dataclasses import replace

        a = two_cliques(4).toarray()
        a[0, 7] = a[7, 0] = 1.0  # bridge, so the graph is connected
        rng = np.random.default_rng(99)
        perm = rng.permutation(8)
        b = a[np.ix_(perm, perm)]  # new index k holds original node perm[k]
        cfg = SkipGramConfig(d=2, walks_per_node=4, walk_length=10, epochs=2)
        n_seeds = 50

        def distances(adjacency, seeds):
            out = []
            for s in seeds:
                cfg_s = replace(cfg, seed=s)
                vecs = train_sgns(
                    generate_walks(sp.csr_matrix(adjacency), cfg_s), 8, cfg_s
                )
                unit = vecs / np.linalg.norm(vecs, axis=1, keepdims=True)
                out.append(1.0 - unit @ unit.T)
            return np.stack(out)

        base = distances(a, range(n_seeds))
        moved = distances(b, range(n_seeds, 2 * n_seeds))
        inv = np.argsort(perm)  # original node i sits at new index inv[i]
        moved = moved[:, inv][:, :, inv]
        rejections = 0
        total = 0
        for i in range(8):
            for j in range(i + 1, 8):
                total += 1
                if ks_2samp(base[:, i, j], moved[:, i, j]).pvalue < 0.01:
                    rejections += 1
        assert rejections / total <= 0.10
