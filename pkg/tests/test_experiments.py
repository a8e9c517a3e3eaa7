import numpy as np
import pytest

from dynembed import (
    DissimilarityMatrix,
    DynamicEmbedding,
    ExperimentSpec,
    SystemPreset,
    dimension_sweep,
    displacement_statistic,
    kmeans_time_clusters,
    run_experiment,
    temporal_dissimilarity,
)
from dynembed.experiments import classify_pvalues


def tiny_spec(**overrides):
    base = dict(
        preset=SystemPreset("static", n=24),
        method="uase",
        level="graph",
        test_kind="temporal",
        replicates=6,
        n_sim=50,
        master_seed=3,
    )
    base.update(overrides)
    return ExperimentSpec(**base)


class TestRunExperiment:
    def test_reproducible_and_worker_invariant(self):
        a = run_experiment(tiny_spec())
        b = run_experiment(tiny_spec())
        c = run_experiment(tiny_spec(), workers=2)
        assert np.array_equal(a.p_values, b.p_values)
        assert np.array_equal(a.p_values, c.p_values)

    def test_pvalues_in_half_open_unit_interval(self):
        report = run_experiment(tiny_spec())
        assert np.all(report.p_values > 0) and np.all(report.p_values <= 1)
        assert report.power_at_5pct == np.mean(report.p_values <= 0.05)

    def test_different_master_seed_changes_pvalues(self):
        a = run_experiment(tiny_spec())
        b = run_experiment(tiny_spec(master_seed=4))
        assert not np.array_equal(a.p_values, b.p_values)

    def test_community_level_uses_block_membership(self):
        report = run_experiment(tiny_spec(level="community", community=1))
        assert report.p_values.size == 6

    def test_spatial_requires_node_sets(self):
        with pytest.raises(ValueError, match="two node sets"):
            tiny_spec(test_kind="spatial", level="graph")

    def test_spatial_community_runs(self):
        report = run_experiment(tiny_spec(test_kind="spatial", level="community"))
        assert np.all(report.p_values > 0)

    def test_node_level_long_series(self):
        spec = tiny_spec(
            preset=SystemPreset("moving", n=16, T=10),
            level="node",
            replicates=3,
            n_sim=30,
        )
        report = run_experiment(spec)
        assert report.p_values.size == 3

    def test_power_preset_community_level_rejected(self):
        with pytest.raises(ValueError, match="block-model"):
            run_experiment(
                tiny_spec(
                    preset=SystemPreset("static-power", n=20),
                    level="community",
                    replicates=1,
                )
            )

    def test_skipgram_method_runs(self):
        from dynembed import SkipGramConfig

        spec = tiny_spec(
            preset=SystemPreset("static", n=12),
            method="unfolded-node2vec",
            replicates=2,
            skipgram=SkipGramConfig(walks_per_node=2, walk_length=8, epochs=1),
        )
        report = run_experiment(spec)
        assert report.p_values.size == 2

    def test_metadata_carried(self):
        report = run_experiment(tiny_spec())
        assert report.metadata["preset"] == "static"
        assert report.metadata["d"] == 2
        payload = report.to_dict()
        assert len(payload["p_values"]) == 6


class TestClassification:
    def test_uniform_grid_accepted(self):
        p = (np.arange(200) + 0.5) / 200
        _, _, decision = classify_pvalues(p)
        assert decision == "uniform"

    def test_small_pvalues_super_uniform(self):
        p = np.full(100, 0.004)
        _, _, decision = classify_pvalues(p)
        assert decision == "super-uniform"

    def test_large_pvalues_sub_uniform(self):
        p = 0.5 + 0.5 * (np.arange(100) + 0.5) / 100
        _, _, decision = classify_pvalues(p)
        assert decision == "sub-uniform"


class TestDimensionSweep:
    def test_one_report_per_dimension(self):
        reports = dimension_sweep(tiny_spec(replicates=3, n_sim=20), dims=[1, 2, 3])
        assert [r.metadata["d"] for r in reports] == [1, 2, 3]

    def test_empty_dims_rejected(self):
        with pytest.raises(ValueError, match="non-empty"):
            dimension_sweep(tiny_spec(), dims=[])


class TestTemporalDissimilarity:
    def test_constant_embedding_zero(self):
        dynamic = np.tile(np.array([[1.0, 2.0]]), (12, 1))
        emb = DynamicEmbedding(np.zeros((0, 2)), dynamic, n=3, T=4)
        R = temporal_dissimilarity(emb)
        assert np.all(R.R == 0)

    def test_two_time_points_match_graph_statistic(self, rng):
        dynamic = rng.standard_normal((16, 3))
        emb = DynamicEmbedding(np.zeros((0, 3)), dynamic, n=8, T=2)
        R = temporal_dissimilarity(emb)
        expected = displacement_statistic(emb.time_point(0), emb.time_point(1))
        assert R.R[0, 1] == pytest.approx(expected, abs=1e-12)

    def test_matches_double_loop_bruteforce(self, rng):
        dynamic = rng.standard_normal((20, 2))
        emb = DynamicEmbedding(np.zeros((0, 2)), dynamic, n=4, T=5)
        nodes = np.array([0, 2])
        R = temporal_dissimilarity(emb, nodes)
        for i in range(5):
            for j in range(5):
                brute = displacement_statistic(
                    emb.time_point(i)[nodes], emb.time_point(j)[nodes]
                )
                assert R.R[i, j] == pytest.approx(brute, abs=1e-12)

    def test_exact_symmetry_and_zero_diagonal(self, rng):
        emb = DynamicEmbedding(np.zeros((0, 2)), rng.standard_normal((30, 2)), n=5, T=6)
        R = temporal_dissimilarity(emb)
        assert np.array_equal(R.R, R.R.T)
        assert np.all(np.diag(R.R) == 0)


class TestKmeansTimeClusters:
    def build_R(self, rows):
        T = len(rows)
        R = np.zeros((T, T))
        for i in range(T):
            for j in range(T):
                if i != j:
                    R[i, j] = abs(rows[i] - rows[j]) + 1.0
        np.fill_diagonal(R, 0.0)
        return DissimilarityMatrix(R=R)

    def test_k_equals_t_zero_inertia(self, rng):
        R = self.build_R(list(rng.standard_normal(5) * 10))
        labels = kmeans_time_clusters(R, K=5, seed=0)
        assert len(set(labels.tolist())) == 5

    def test_k_one_single_cluster(self, rng):
        R = self.build_R(list(rng.standard_normal(5)))
        assert len(set(kmeans_time_clusters(R, K=1, seed=0).tolist())) == 1

    def test_two_regimes_recovered(self):
        values = [0.0, 0.1, 0.05, 10.0, 10.2, 9.9]
        R = self.build_R(values)
        labels = kmeans_time_clusters(R, K=2, seed=0)
        assert len(set(labels[:3].tolist())) == 1
        assert len(set(labels[3:].tolist())) == 1
        assert labels[0] != labels[3]

    def test_k_out_of_range(self, rng):
        R = self.build_R([0.0, 1.0])
        with pytest.raises(ValueError, match="out of range"):
            kmeans_time_clusters(R, K=3, seed=0)

    def test_deterministic_under_seed(self, rng):
        R = self.build_R(list(rng.standard_normal(8)))
        a = kmeans_time_clusters(R, K=3, seed=4)
        b = kmeans_time_clusters(R, K=3, seed=4)
        assert np.array_equal(a, b)


class TestDissimilarityValidation:
    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            DissimilarityMatrix(R=np.array([[0.0, 1.0], [2.0, 0.0]]))

    def test_rejects_nonzero_diagonal(self):
        with pytest.raises(ValueError):
            DissimilarityMatrix(R=np.array([[1.0, 0.0], [0.0, 0.0]]))


@pytest.mark.slow
class TestKCommunityPowerCurve:
    def test_overestimating_d_reduces_power(self):
        # eight-community system with one slightly moving community: power
        # peaks in the mid-range of d and degrades when d is overestimated
        preset = SystemPreset("k-community", n=400, p_within=(0.5,) * 8)
        spec = ExperimentSpec(
            preset=preset, method="uase", level="community", community=1,
            replicates=100, n_sim=500, master_seed=3,
        )
        reports = dimension_sweep(spec, dims=[1, 4, 8, 12], workers=2)
        power = {r.metadata["d"]: r.power_at_5pct for r in reports}
        assert max(power.values()) > 0.25
        assert power[12] < max(power[4], power[8])
        assert power[1] < max(power[4], power[8])


class TestSeasonalClustering:
    def test_periodic_regimes_recovered_from_urlse(self):
        # seasonal synthetic network: within-probability of community 2
        # alternates every two snapshots; k-means on the dissimilarity matrix
        # of a URLSE recovers the periodic label pattern
        import scipy.sparse as sp

        from dynembed import DsbmSpec, sample_dsbm, urlse

        n, T = 80, 8
        tau = np.zeros(n, dtype=int)
        tau[n // 2 :] = 1
        hi = np.array([[0.6, 0.2], [0.2, 0.6]])
        lo = np.array([[0.6, 0.2], [0.2, 0.3]])
        B = [hi if (t // 2) % 2 == 0 else lo for t in range(T)]
        net = sample_dsbm(DsbmSpec(B, tau), seed=5)
        emb = urlse(net, 2, seed=0)
        R = temporal_dissimilarity(emb)
        labels = kmeans_time_clusters(R, K=2, seed=0)
        expected = np.array([(t // 2) % 2 for t in range(T)])
        flips = labels if labels[0] == expected[0] else 1 - labels
        assert np.array_equal(flips, expected)

    def test_error_attribution_names_replicate(self):
        spec = tiny_spec(preset=SystemPreset("static", n=4), d=30, replicates=2)
        with pytest.raises(RuntimeError, match="replicate 0"):
            run_experiment(spec)
